//! Dense bit-packed zero-one matrices, interval contraction, interval-minor
//! containment, and the coupling that reduces a random permutation to a
//! small random matrix.
//!
//! Rows and columns are 1-based. Row-major bit packing keeps left-to-right
//! row scans (the hot path of the scanning module) on contiguous words.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use thiserror::Error;

use crate::perm::Permutation;
use crate::rng;
use crate::stats::{wilson_interval, WilsonInterval, Z_99};

/// Hard size guard for the exhaustive interval-minor oracle.
pub const INTERVAL_MINOR_GUARD: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("bad interval partition: {0}")]
    BadPartition(String),
    #[error("matrix {rows}x{cols} exceeds the exhaustive guard {guard}")]
    TooLarge {
        rows: usize,
        cols: usize,
        guard: usize,
    },
    #[error("n = {n} is not divisible by 4k = {four_k}")]
    BadDivisibility { n: usize, four_k: usize },
    #[error("trial count must be positive")]
    EmptyTrialSet,
    #[error("position ({y}, {x}) out of bounds for {rows}x{cols} matrix")]
    OutOfBounds {
        y: usize,
        x: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid matrix text: {0}")]
    Parse(String),
}

/// A `rows x cols` matrix of bits, indexed `(y, x)` with `y` the row.
#[derive(Clone, PartialEq, Eq)]
pub struct ZeroOneMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl ZeroOneMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        let words_per_row = cols.div_ceil(64);
        ZeroOneMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn filled(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for y in 1..=rows {
            for x in 1..=cols {
                m.set(y, x, true);
            }
        }
        m
    }

    /// Entrywise independent fair bits; pure function of `seed`.
    pub fn random(rows: usize, cols: usize, seed: u64) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mut rng = rng::rng_from_seed(seed);
        let tail_bits = cols % 64;
        for y in 0..rows {
            for w in 0..m.words_per_row {
                let mut word = rng.next_u64();
                if w + 1 == m.words_per_row && tail_bits != 0 {
                    word &= (1u64 << tail_bits) - 1;
                }
                m.bits[y * m.words_per_row + w] = word;
            }
        }
        m
    }

    /// The permutation matrix: entry `(sigma(x), x) = 1` for every position
    /// `x` (row index = value, column index = position).
    pub fn permutation_matrix(sigma: &Permutation) -> Self {
        let n = sigma.len();
        assert!(n > 0, "permutation matrix needs length >= 1");
        let mut m = Self::zeros(n, n);
        for x in 1..=n {
            m.set(sigma.at(x), x, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, y: usize, x: usize) -> bool {
        assert!(self.in_bounds(y, x), "get out of bounds");
        let bit = x - 1;
        self.bits[(y - 1) * self.words_per_row + bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn set(&mut self, y: usize, x: usize, value: bool) {
        assert!(self.in_bounds(y, x), "set out of bounds");
        let bit = x - 1;
        let word = &mut self.bits[(y - 1) * self.words_per_row + bit / 64];
        if value {
            *word |= 1 << (bit % 64);
        } else {
            *word &= !(1 << (bit % 64));
        }
    }

    pub fn in_bounds(&self, y: usize, x: usize) -> bool {
        (1..=self.rows).contains(&y) && (1..=self.cols).contains(&x)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// First column `>= from_x` holding a one in row `y`, if any.
    pub fn next_one_in_row(&self, y: usize, from_x: usize) -> Option<usize> {
        assert!((1..=self.rows).contains(&y) && from_x >= 1);
        if from_x > self.cols {
            return None;
        }
        let base = (y - 1) * self.words_per_row;
        let start_bit = from_x - 1;
        let mut w = start_bit / 64;
        let off = start_bit % 64;
        let mut word = self.bits[base + w] & !((1u64 << off) - 1);
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize + 1);
            }
            w += 1;
            if w >= self.words_per_row {
                return None;
            }
            word = self.bits[base + w];
        }
    }

    fn validate_partition(partition: &[(usize, usize)], extent: usize) -> Result<(), MatrixError> {
        if partition.is_empty() {
            return Err(MatrixError::BadPartition("empty partition".into()));
        }
        let mut expected_start = 1;
        for &(start, end) in partition {
            if start != expected_start || end < start {
                return Err(MatrixError::BadPartition(format!(
                    "interval ({start}, {end}) breaks coverage at {expected_start}"
                )));
            }
            expected_start = end + 1;
        }
        if expected_start != extent + 1 {
            return Err(MatrixError::BadPartition(format!(
                "partition covers 1..={} but extent is {extent}",
                expected_start - 1
            )));
        }
        Ok(())
    }

    /// Contract consecutive row intervals; an output entry is the OR of its
    /// interval in that column.
    pub fn contract_rows(&self, partition: &[(usize, usize)]) -> Result<Self, MatrixError> {
        Self::validate_partition(partition, self.rows)?;
        let mut out = Self::zeros(partition.len(), self.cols);
        for (oy, &(start, end)) in partition.iter().enumerate() {
            for y in start..=end {
                for w in 0..self.words_per_row {
                    out.bits[oy * out.words_per_row + w] |=
                        self.bits[(y - 1) * self.words_per_row + w];
                }
            }
        }
        Ok(out)
    }

    /// Contract consecutive column intervals by entrywise OR.
    pub fn contract_cols(&self, partition: &[(usize, usize)]) -> Result<Self, MatrixError> {
        Self::validate_partition(partition, self.cols)?;
        let mut out = Self::zeros(self.rows, partition.len());
        for y in 1..=self.rows {
            for (ox, &(start, end)) in partition.iter().enumerate() {
                if let Some(x) = self.next_one_in_row(y, start) {
                    if x <= end {
                        out.set(y, ox + 1, true);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact decision that the permutation matrix of `pi` is an interval
    /// minor of `self`, returned as `k` positions with strictly increasing
    /// columns and rows ordered like the pattern values.
    pub fn contains_permutation(&self, pi: &Permutation) -> Option<Vec<(usize, usize)>> {
        let k = pi.len();
        if k == 0 {
            return Some(vec![]);
        }
        if k > self.rows || k > self.cols {
            return None;
        }
        let pat_index_of_value: Vec<usize> = {
            let mut inv = vec![0; k];
            for j in 1..=k {
                inv[pi.at(j) - 1] = j;
            }
            inv
        };
        let mut chosen: Vec<(usize, usize)> = vec![(0, 0); k];
        if self.place_value(pi, &pat_index_of_value, &mut chosen, 1, 1) {
            Some(chosen)
        } else {
            None
        }
    }

    fn place_value(
        &self,
        pi: &Permutation,
        pat_index_of_value: &[usize],
        chosen: &mut Vec<(usize, usize)>,
        v: usize,
        min_row: usize,
    ) -> bool {
        let k = pi.len();
        if v > k {
            return true;
        }
        let j = pat_index_of_value[v - 1];
        let mut lo_col = 0;
        let mut hi_col = self.cols + 1;
        for (idx, &(r, c)) in chosen.iter().enumerate() {
            if r == 0 {
                continue;
            }
            if idx + 1 < j {
                lo_col = lo_col.max(c);
            } else {
                hi_col = hi_col.min(c);
            }
        }
        if lo_col + 1 >= hi_col {
            return false;
        }
        // Enough rows must remain above for the values still unplaced.
        for row in min_row..=self.rows - (k - v) {
            let mut col = lo_col + 1;
            while let Some(c) = self.next_one_in_row(row, col) {
                if c >= hi_col {
                    break;
                }
                chosen[j - 1] = (row, c);
                if self.place_value(pi, pat_index_of_value, chosen, v + 1, row + 1) {
                    return true;
                }
                chosen[j - 1] = (0, 0);
                col = c + 1;
            }
        }
        false
    }

    /// Every one-position, row-major. Handy for tests and reports.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 1..=self.rows {
            let mut x = 1;
            while let Some(c) = self.next_one_in_row(y, x) {
                out.push((y, c));
                x = c + 1;
            }
        }
        out
    }
}

/// Exhaustive interval-minor decision: true iff some pair of interval
/// partitions turns `m` (after the block any-one rule and ones-to-zeros)
/// into exactly `p`. Guarded to small matrices; this is the oracle the fast
/// permutation-specific path is validated against.
pub fn is_interval_minor(p: &ZeroOneMatrix, m: &ZeroOneMatrix) -> Result<bool, MatrixError> {
    if m.rows > INTERVAL_MINOR_GUARD || m.cols > INTERVAL_MINOR_GUARD {
        return Err(MatrixError::TooLarge {
            rows: m.rows,
            cols: m.cols,
            guard: INTERVAL_MINOR_GUARD,
        });
    }
    if p.rows > m.rows || p.cols > m.cols {
        return Ok(false);
    }
    // prefix[y][x] = number of ones in the submatrix (1..=y, 1..=x)
    let mut prefix = vec![vec![0u32; m.cols + 1]; m.rows + 1];
    for y in 1..=m.rows {
        for x in 1..=m.cols {
            prefix[y][x] =
                prefix[y - 1][x] + prefix[y][x - 1] - prefix[y - 1][x - 1] + u32::from(m.get(y, x));
        }
    }
    let block_has_one = |r: (usize, usize), c: (usize, usize)| -> bool {
        prefix[r.1][c.1] + prefix[r.0 - 1][c.0 - 1] > prefix[r.0 - 1][c.1] + prefix[r.1][c.0 - 1]
    };

    let row_parts = compositions(m.rows, p.rows);
    let col_parts = compositions(m.cols, p.cols);
    let p_ones = p.ones();
    for rp in &row_parts {
        'cols: for cp in &col_parts {
            for &(py, px) in &p_ones {
                if !block_has_one(rp[py - 1], cp[px - 1]) {
                    continue 'cols;
                }
            }
            return Ok(true);
        }
    }
    Ok(false)
}

/// All ways to split `1..=total` into `parts` consecutive nonempty intervals.
fn compositions(total: usize, parts: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts);
    fn rec(
        start: usize,
        total: usize,
        parts_left: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if parts_left == 1 {
            current.push((start, total));
            out.push(current.clone());
            current.pop();
            return;
        }
        // leave at least one element per remaining part
        for end in start..=total - (parts_left - 1) {
            current.push((start, end));
            rec(end + 1, total, parts_left - 1, current, out);
            current.pop();
        }
    }
    if parts >= 1 && parts <= total {
        rec(1, total, parts, &mut current, &mut out);
    }
    out
}

/// A permutation coupled with the reduced matrix built from the same
/// uniforms. `sigma(j)` is the rank of the `j`-th uniform, `mu(y, x) = 1`
/// iff the `x`-th index block holds a uniform in the `y`-th value band.
/// With this orientation `mu` is always an interval minor of the
/// permutation matrix of `sigma`, so containment in `mu` implies
/// containment in `sigma`.
#[derive(Clone, Debug)]
pub struct CoupledSample {
    pub k: usize,
    pub n: usize,
    pub sigma: Permutation,
    pub mu: ZeroOneMatrix,
    pub uniforms: Vec<f64>,
}

impl CoupledSample {
    /// Build the coupled pair from explicit uniforms.
    pub fn from_uniforms(k: usize, n: usize, uniforms: &[f64]) -> Result<Self, MatrixError> {
        assert!(k >= 1, "k must be positive");
        if n == 0 || !n.is_multiple_of(4 * k) {
            return Err(MatrixError::BadDivisibility { n, four_k: 4 * k });
        }
        assert_eq!(uniforms.len(), n, "need exactly n uniforms");
        let sorted = Permutation::from_uniforms(uniforms)
            .map_err(|e| MatrixError::Parse(format!("uniforms not usable: {e}")))?;
        // rank map: sigma(j) = rank of uniforms[j-1]
        let sigma = sorted.inverse();
        let two_k = 2 * k;
        let m = n / (4 * k);
        let mut mu = ZeroOneMatrix::zeros(two_k, m);
        for (j, &u) in uniforms.iter().enumerate() {
            let y = band_of(u, two_k);
            let x = j / (4 * k) + 1;
            mu.set(y, x, true);
        }
        Ok(CoupledSample {
            k,
            n,
            sigma,
            mu,
            uniforms: uniforms.to_vec(),
        })
    }

    /// Draw `n` i.i.d. uniforms and couple; pure function of `seed`.
    pub fn build(k: usize, n: usize, seed: u64) -> Result<Self, MatrixError> {
        if k == 0 || n == 0 || !n.is_multiple_of(4 * k) {
            return Err(MatrixError::BadDivisibility {
                n,
                four_k: 4 * k.max(1),
            });
        }
        let mut rng = rng::rng_from_seed(seed);
        let uniforms: Vec<f64> = (0..n).map(|_| rand::Rng::gen::<f64>(&mut rng)).collect();
        Self::from_uniforms(k, n, &uniforms)
    }

    /// Check the interval-minor relation directly: every one of `mu` must be
    /// covered by a one of the permutation matrix inside the corresponding
    /// (realized value band) x (index block) block. When every band is
    /// populated, additionally check that contracting the permutation matrix
    /// by those partitions reproduces `mu` exactly.
    pub fn verify_minor_witness(&self) -> bool {
        let two_k = 2 * self.k;
        let m = self.n / (4 * self.k);
        // cumulative rank cutoffs per band
        let mut counts = vec![0usize; two_k + 1];
        for &u in &self.uniforms {
            counts[band_of(u, two_k)] += 1;
        }
        let mut cutoff = vec![0usize; two_k + 1];
        for y in 1..=two_k {
            cutoff[y] = cutoff[y - 1] + counts[y];
        }
        for y in 1..=two_k {
            for x in 1..=m {
                if !self.mu.get(y, x) {
                    continue;
                }
                let block = (x - 1) * 4 * self.k + 1..=x * 4 * self.k;
                let hit = block.into_iter().any(|j| {
                    let rank = self.sigma.at(j);
                    cutoff[y - 1] < rank && rank <= cutoff[y]
                });
                if !hit {
                    return false;
                }
            }
        }
        if counts[1..].iter().all(|&c| c > 0) {
            let row_partition: Vec<(usize, usize)> = (1..=two_k)
                .map(|y| (cutoff[y - 1] + 1, cutoff[y]))
                .collect();
            let col_partition: Vec<(usize, usize)> = (1..=m)
                .map(|x| ((x - 1) * 4 * self.k + 1, x * 4 * self.k))
                .collect();
            let contracted = ZeroOneMatrix::permutation_matrix(&self.sigma)
                .contract_rows(&row_partition)
                .and_then(|r| r.contract_cols(&col_partition));
            match contracted {
                Ok(c) => c == self.mu,
                Err(_) => false,
            }
        } else {
            true
        }
    }
}

/// Band index in `1..=bands` for a uniform in `[0, 1)`.
fn band_of(u: f64, bands: usize) -> usize {
    (((u * bands as f64) as usize).min(bands - 1)) + 1
}

/// Per-entry one-frequencies of the coupled matrix with Wilson 99%
/// intervals, estimated over independent trials.
#[derive(Debug, Clone)]
pub struct EntryFrequencyTable {
    pub k: usize,
    pub n: usize,
    pub trials: u64,
    /// `entries[y-1][x-1]` is the interval for entry `(y, x)`.
    pub entries: Vec<Vec<WilsonInterval>>,
}

impl EntryFrequencyTable {
    pub fn min_estimate(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|w| w.estimate)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_upper_edge(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|w| w.high)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Estimate the per-entry one-frequency of the coupled matrix.
pub fn estimate_entry_lower_bound(
    k: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<EntryFrequencyTable, MatrixError> {
    if trials == 0 {
        return Err(MatrixError::EmptyTrialSet);
    }
    if k == 0 || n == 0 || !n.is_multiple_of(4 * k) {
        return Err(MatrixError::BadDivisibility {
            n,
            four_k: 4 * k.max(1),
        });
    }
    let two_k = 2 * k;
    let m = n / (4 * k);
    let mut counts = vec![vec![0u64; m]; two_k];
    for t in 0..trials {
        let sample = CoupledSample::build(k, n, rng::derive_seed(seed, t))?;
        for y in 1..=two_k {
            for x in 1..=m {
                if sample.mu.get(y, x) {
                    counts[y - 1][x - 1] += 1;
                }
            }
        }
    }
    let entries = counts
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| wilson_interval(c, trials, Z_99))
                .collect()
        })
        .collect();
    Ok(EntryFrequencyTable {
        k,
        n,
        trials,
        entries,
    })
}

impl fmt::Display for ZeroOneMatrix {
    /// Text format: first line `"rows cols"`, then one line of `0`/`1`
    /// characters per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for y in 1..=self.rows {
            for x in 1..=self.cols {
                write!(f, "{}", u8::from(self.get(y, x)))?;
            }
            if y < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroOneMatrix({}x{})", self.rows, self.cols)
    }
}

impl FromStr for ZeroOneMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| MatrixError::Parse("empty input".into()))?;
        let mut dims = header.split_whitespace();
        let rows: usize = dims
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| MatrixError::Parse("bad row count".into()))?;
        let cols: usize = dims
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| MatrixError::Parse("bad column count".into()))?;
        if dims.next().is_some() {
            return Err(MatrixError::Parse("trailing tokens in header".into()));
        }
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Parse("dimensions must be positive".into()));
        }
        // The body needs rows * cols binary characters; refuse headers the
        // input cannot possibly back before allocating anything.
        let needed = rows
            .checked_mul(cols)
            .and_then(|bits| bits.checked_add(rows - 1));
        match needed {
            Some(n) if n <= s.len() => {}
            _ => {
                return Err(MatrixError::Parse(format!(
                    "input too short for a {rows}x{cols} matrix"
                )))
            }
        }
        let mut out = ZeroOneMatrix::zeros(rows, cols);
        let mut y = 0;
        for line in lines {
            if y == rows {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(MatrixError::Parse("too many rows".into()));
            }
            y += 1;
            if line.len() != cols {
                return Err(MatrixError::Parse(format!(
                    "row {y} has {} characters, expected {cols}",
                    line.len()
                )));
            }
            for (i, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => out.set(y, i + 1, true),
                    _ => {
                        return Err(MatrixError::Parse(format!(
                            "row {y} holds non-binary byte {ch:#x}"
                        )))
                    }
                }
            }
        }
        if y != rows {
            return Err(MatrixError::Parse(format!("expected {rows} rows, got {y}")));
        }
        Ok(out)
    }
}
