//! Greedy left-to-right thread scanning for a pattern inside a zero-one
//! matrix, zero-run statistics, and the exact tail of a sum of geometric
//! run lengths.
//!
//! Thread `t` looks for the pattern in rows `t+1 ..= t+k`: it scans row
//! `t + pi(1)` left to right until a one is found, then row `t + pi(2)`
//! from the next column, and so on. A thread reads at most one entry per
//! column. An optional cap makes the scan treat the cap-th consecutive zero
//! in a row as a pretend one and move on.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::matrix::ZeroOneMatrix;
use crate::perm::Permutation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScanError {
    #[error("thread offset {t} with pattern length {k} exceeds {rows} rows")]
    RowRangeExceeded { t: usize, k: usize, rows: usize },
    #[error("position ({y}, {x}) out of bounds")]
    OutOfBounds { y: usize, x: usize },
    #[error("thread offsets must be strictly increasing and >= 1")]
    BadOffsets,
    #[error("placement rows must be distinct")]
    DuplicateRow,
    #[error("cannot choose {count} offsets in 1..={max_t} avoiding the forbidden differences")]
    Infeasible { count: usize, max_t: usize },
}

/// Record of one thread's scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadTrace {
    /// Thread offset `t`; the scan touches rows `t+1 ..= t+k`.
    pub offset: usize,
    /// Every entry actually read, in scan order (columns strictly increase).
    pub exposed: Vec<(usize, usize)>,
    pub success: bool,
    /// On success, the `k` placed positions `(t + pi(j), c_j)` in pattern
    /// order; pretend ones included.
    pub witness: Option<Vec<(usize, usize)>>,
    /// Number of cap-triggered pretend ones.
    pub pretended: usize,
}

/// Entry-set intersection size for one thread pair, keyed by offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OverlapEntry {
    pub i: usize,
    pub j: usize,
    pub size: usize,
}

/// Aggregate of a multi-thread scan over one matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub traces: Vec<ThreadTrace>,
    pub overlaps: Vec<OverlapEntry>,
    pub any_success: bool,
}

/// Length of the run of zeros starting at `(y, x)` and continuing right;
/// 0 iff the entry itself is a one, truncated at the right edge.
pub fn run_length(m: &ZeroOneMatrix, y: usize, x: usize) -> Result<usize, ScanError> {
    if !m.in_bounds(y, x) {
        return Err(ScanError::OutOfBounds { y, x });
    }
    Ok(match m.next_one_in_row(y, x) {
        Some(c) => c - x,
        None => m.cols() - x + 1,
    })
}

/// Exact `Pr(G_1 + … + G_ell >= r)` for i.i.d. geometric failure counts
/// with success probability 1/2: the probability of fewer than `ell`
/// successes among the first `r + ell - 1` fair coin flips, evaluated as a
/// compensated binomial sum.
pub fn negative_binomial_tail(ell: usize, r: usize) -> f64 {
    assert!(ell >= 1, "ell must be positive");
    if r == 0 {
        return 1.0;
    }
    let n = r + ell - 1;
    let mut term = 0.5f64.powi(n as i32);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for s in 0..ell {
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= (n - s) as f64 / (s + 1) as f64;
    }
    sum.clamp(0.0, 1.0)
}

/// Scan along thread `t` for `pi`. With `cap = Some(c)`, a row scan that
/// sees `c` consecutive zeros treats the `c`-th as a pretend one.
pub fn scan_thread(
    m: &ZeroOneMatrix,
    pi: &Permutation,
    t: usize,
    cap: Option<usize>,
) -> Result<ThreadTrace, ScanError> {
    let k = pi.len();
    if t == 0 || t + k > m.rows() {
        return Err(ScanError::RowRangeExceeded {
            t,
            k,
            rows: m.rows(),
        });
    }
    if let Some(c) = cap {
        assert!(c >= 1, "cap must be positive");
    }
    let mut exposed = Vec::new();
    let mut witness = Vec::with_capacity(k);
    let mut pretended = 0;
    let mut col = 1;
    let mut success = true;
    for j in 1..=k {
        let row = t + pi.at(j);
        if col > m.cols() {
            success = false;
            break;
        }
        let real = m.next_one_in_row(row, col);
        // Position where this element lands, if any.
        let placed = match (real, cap) {
            (Some(c), None) => Some((c, false)),
            (Some(c), Some(cap)) if c - col < cap => Some((c, false)),
            (_, Some(cap)) if m.cols() - col + 1 >= cap => Some((col + cap - 1, true)),
            _ => None,
        };
        match placed {
            Some((stop, pretend)) => {
                for x in col..=stop {
                    exposed.push((row, x));
                }
                witness.push((row, stop));
                if pretend {
                    pretended += 1;
                }
                col = stop + 1;
            }
            None => {
                for x in col..=m.cols() {
                    exposed.push((row, x));
                }
                success = false;
                break;
            }
        }
    }
    Ok(ThreadTrace {
        offset: t,
        exposed,
        success,
        witness: if success { Some(witness) } else { None },
        pretended,
    })
}

/// Run one scan per offset on the same matrix and tabulate pairwise
/// exposed-entry intersections.
pub fn multi_thread_scan(
    m: &ZeroOneMatrix,
    pi: &Permutation,
    threads: &[usize],
    cap: Option<usize>,
) -> Result<ScanReport, ScanError> {
    if threads.is_empty() || threads.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ScanError::BadOffsets);
    }
    let traces = threads
        .iter()
        .map(|&t| scan_thread(m, pi, t, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let mut overlaps = Vec::new();
    for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            let size = common_exposed(&traces[i], &traces[j], m.cols()).len();
            overlaps.push(OverlapEntry {
                i: traces[i].offset,
                j: traces[j].offset,
                size,
            });
        }
    }
    let any_success = traces.iter().any(|tr| tr.success);
    Ok(ScanReport {
        traces,
        overlaps,
        any_success,
    })
}

/// Entries exposed by both traces. Each trace reads at most one entry per
/// column, so a column match requires equal rows.
pub fn common_exposed(a: &ThreadTrace, b: &ThreadTrace, cols: usize) -> Vec<(usize, usize)> {
    let mut row_at_col = vec![0usize; cols + 1];
    for &(y, x) in &a.exposed {
        row_at_col[x] = y;
    }
    b.exposed
        .iter()
        .copied()
        .filter(|&(y, x)| row_at_col[x] == y)
        .collect()
}

/// Rows holding entries exposed by both traces.
pub fn common_exposed_rows(a: &ThreadTrace, b: &ThreadTrace, cols: usize) -> Vec<usize> {
    let rows: BTreeSet<usize> = common_exposed(a, b, cols)
        .into_iter()
        .map(|(y, _)| y)
        .collect();
    rows.into_iter().collect()
}

/// Greedy smallest-first choice of `count` offsets in `1..=max_t` whose
/// pairwise differences avoid `forbidden`.
pub fn choose_threads(
    forbidden: &BTreeSet<usize>,
    count: usize,
    max_t: usize,
) -> Result<Vec<usize>, ScanError> {
    assert!(count >= 1);
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    for t in 1..=max_t {
        if chosen.iter().all(|&s| !forbidden.contains(&(t - s))) {
            chosen.push(t);
            if chosen.len() == count {
                return Ok(chosen);
            }
        }
    }
    Err(ScanError::Infeasible { count, max_t })
}

/// True iff every run of zeros has length at most `threshold`; violating
/// positions are enumerated.
pub fn check_max_run(m: &ZeroOneMatrix, threshold: usize) -> (bool, Vec<(usize, usize)>) {
    let mut violations = Vec::new();
    for y in 1..=m.rows() {
        let mut run = 0usize;
        for x in (1..=m.cols()).rev() {
            run = if m.get(y, x) { 0 } else { run + 1 };
            if run > threshold {
                violations.push((y, x));
            }
        }
    }
    violations.sort_unstable();
    (violations.is_empty(), violations)
}

/// True iff at most `max_exception_rows` rows contain a run longer than
/// `threshold`; the offending rows are returned either way.
pub fn check_max_run_rows(
    m: &ZeroOneMatrix,
    threshold: usize,
    max_exception_rows: usize,
) -> (bool, Vec<usize>) {
    let (_, violations) = check_max_run(m, threshold);
    let rows: BTreeSet<usize> = violations.into_iter().map(|(y, _)| y).collect();
    let rows: Vec<usize> = rows.into_iter().collect();
    (rows.len() <= max_exception_rows, rows)
}

/// Sum of run lengths at `(row + t, column)` over a placement with distinct
/// rows. Audits the bounded-total-run property for concrete placements of a
/// structured map.
pub fn placement_run_sum(
    m: &ZeroOneMatrix,
    placement: &[(usize, usize)],
    t: usize,
) -> Result<usize, ScanError> {
    let mut seen = BTreeSet::new();
    for &(y, _) in placement {
        if !seen.insert(y) {
            return Err(ScanError::DuplicateRow);
        }
    }
    let mut total = 0;
    for &(y, x) in placement {
        total += run_length(m, y + t, x)?;
    }
    Ok(total)
}

impl ScanReport {
    /// JSON with per-trace `{t, success, witness, exposed_count, pretended}`
    /// and the overlap list `{i, j, size}`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct TraceJson<'a> {
            t: usize,
            success: bool,
            witness: &'a Option<Vec<(usize, usize)>>,
            exposed_count: usize,
            pretended: usize,
        }
        let traces: Vec<TraceJson> = self
            .traces
            .iter()
            .map(|tr| TraceJson {
                t: tr.offset,
                success: tr.success,
                witness: &tr.witness,
                exposed_count: tr.exposed.len(),
                pretended: tr.pretended,
            })
            .collect();
        serde_json::json!({
            "traces": traces,
            "overlaps": self.overlaps,
            "any_success": self.any_success,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn figure1() -> ZeroOneMatrix {
        include_str!("../tests/fixtures/figure1.txt")
            .parse()
            .unwrap()
    }

    fn figure2() -> ZeroOneMatrix {
        include_str!("../tests/fixtures/figure2.txt")
            .parse()
            .unwrap()
    }

    #[test]
    fn run_length_examples() {
        let fig1 = figure1();
        assert_eq!(run_length(&fig1, 5, 3).unwrap(), 5);
        assert_eq!(run_length(&fig1, 5, 8).unwrap(), 0);
        assert_eq!(run_length(&fig1, 1, 1).unwrap(), 12);
        assert_eq!(
            run_length(&fig1, 7, 1),
            Err(ScanError::OutOfBounds { y: 7, x: 1 })
        );
    }

    /// Oracle: enumerate all bitstrings of length r + ell - 1 and count those
    /// with fewer than ell ones.
    fn tail_by_enumeration(ell: usize, r: usize) -> f64 {
        let n = r + ell - 1;
        assert!(n <= 20);
        let mut hits = 0u64;
        for word in 0u64..(1 << n) {
            if (word.count_ones() as usize) < ell {
                hits += 1;
            }
        }
        hits as f64 / (1u64 << n) as f64
    }

    /// Second algebraic route: sum the negative-binomial pmf below r.
    fn tail_by_pmf(ell: usize, r: usize) -> f64 {
        let mut below = 0.0;
        for s in 0..r {
            // Pr(sum = s) = C(s + ell - 1, s) / 2^(s + ell)
            let mut term = 0.5f64.powi((s + ell) as i32);
            for i in 0..s {
                term *= (ell + i) as f64 / (i + 1) as f64;
            }
            below += term;
        }
        1.0 - below
    }

    #[test]
    fn negative_binomial_tail_examples() {
        assert_eq!(negative_binomial_tail(1, 1), 0.5);
        assert_eq!(negative_binomial_tail(1, 3), 0.125);
        assert_eq!(negative_binomial_tail(3, 0), 1.0);
        let v = negative_binomial_tail(5, 20);
        assert!(v < (-20.0f64 / 8.0).exp(), "{v}");
    }

    #[test]
    fn negative_binomial_tail_matches_oracles() {
        for ell in 1..=4 {
            for r in 0..=12 {
                let exact = negative_binomial_tail(ell, r);
                assert!((exact - tail_by_enumeration(ell, r)).abs() < 1e-12);
                assert!((exact - tail_by_pmf(ell, r)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scan_figure1_thread2() {
        let trace = scan_thread(&figure1(), &perm("1,3,2"), 2, None).unwrap();
        assert!(trace.success);
        assert_eq!(
            trace.witness.as_ref().unwrap(),
            &vec![(3, 2), (5, 8), (4, 11)]
        );
        assert_eq!(trace.exposed.len(), 11);
        assert_eq!(trace.pretended, 0);
    }

    #[test]
    fn scan_all_ones_and_all_zeros() {
        let ones = ZeroOneMatrix::filled(8, 10);
        for pi in crate::perm::all_permutations(3) {
            let tr = scan_thread(&ones, &pi, 2, None).unwrap();
            assert!(tr.success);
            let cols: Vec<usize> = tr.witness.unwrap().iter().map(|&(_, c)| c).collect();
            assert_eq!(cols, vec![1, 2, 3]);
        }

        let zeros = ZeroOneMatrix::zeros(8, 10);
        let tr = scan_thread(&zeros, &perm("2,1,3"), 1, None).unwrap();
        assert!(!tr.success);
        assert_eq!(tr.exposed.len(), 10);
        assert!(tr.witness.is_none());
    }

    #[test]
    fn scan_offset_validation() {
        let m = ZeroOneMatrix::filled(5, 5);
        assert!(matches!(
            scan_thread(&m, &perm("1,2,3"), 3, None),
            Err(ScanError::RowRangeExceeded { .. })
        ));
        assert!(matches!(
            scan_thread(&m, &perm("1,2,3"), 0, None),
            Err(ScanError::RowRangeExceeded { .. })
        ));
        assert!(scan_thread(&m, &perm("1,2,3"), 2, None).is_ok());
    }

    #[test]
    fn cap_one_pretends_immediately() {
        let zeros = ZeroOneMatrix::zeros(8, 10);
        let tr = scan_thread(&zeros, &perm("2,1,3"), 1, Some(1)).unwrap();
        assert!(tr.success);
        assert_eq!(tr.pretended, 3);
        let cols: Vec<usize> = tr.witness.unwrap().iter().map(|&(_, c)| c).collect();
        assert_eq!(cols, vec![1, 2, 3]);
    }

    #[test]
    fn cap_only_triggers_after_cap_zeros() {
        // Row 3 = (0 1 ...): one zero then a one; cap 2 must take the real one.
        let fig1 = figure1();
        let tr = scan_thread(&fig1, &perm("1,3,2"), 2, Some(2)).unwrap();
        assert!(tr.success);
        let w = tr.witness.unwrap();
        assert_eq!(w[0], (3, 2));
        // Rows 5 and 4 have longer zero prefixes; cap 2 pretends there.
        assert_eq!(w[1], (5, 4));
        assert_eq!(tr.pretended, 2);
    }

    #[test]
    fn multi_thread_figure2() {
        let report = multi_thread_scan(&figure2(), &perm("1,3,2"), &[2, 3], None).unwrap();
        assert!(!report.traces[0].success);
        assert!(report.traces[1].success);
        assert!(report.any_success);
        assert_eq!(
            report.traces[1].witness.as_ref().unwrap(),
            &vec![(4, 5), (6, 6), (5, 9)]
        );
        let rows = common_exposed_rows(&report.traces[0], &report.traces[1], 12);
        assert_eq!(rows, vec![5]);
        assert_eq!(
            report.overlaps,
            vec![OverlapEntry {
                i: 2,
                j: 3,
                size: 3
            }]
        );
    }

    #[test]
    fn single_thread_report_reduces_to_scan() {
        let m = ZeroOneMatrix::random(10, 30, 5);
        let pi = perm("2,4,1,3");
        let report = multi_thread_scan(&m, &pi, &[3], None).unwrap();
        assert_eq!(report.traces.len(), 1);
        assert!(report.overlaps.is_empty());
        assert_eq!(report.traces[0], scan_thread(&m, &pi, 3, None).unwrap());
        assert!(matches!(
            multi_thread_scan(&m, &pi, &[3, 3], None),
            Err(ScanError::BadOffsets)
        ));
    }

    #[test]
    fn choose_threads_examples() {
        let empty = BTreeSet::new();
        assert_eq!(choose_threads(&empty, 3, 10).unwrap(), vec![1, 2, 3]);

        let one: BTreeSet<usize> = [1].into();
        assert_eq!(choose_threads(&one, 3, 10).unwrap(), vec![1, 3, 5]);

        let all: BTreeSet<usize> = (1..=9).collect();
        assert!(matches!(
            choose_threads(&all, 2, 10),
            Err(ScanError::Infeasible { .. })
        ));
    }

    #[test]
    fn max_run_examples() {
        let (ok, v) = check_max_run(&ZeroOneMatrix::filled(3, 7), 1);
        assert!(ok && v.is_empty());

        let (ok, v) = check_max_run(&ZeroOneMatrix::zeros(2, 4), 3);
        assert!(!ok);
        assert_eq!(v, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn max_run_rows_examples() {
        let (ok, rows) = check_max_run_rows(&ZeroOneMatrix::filled(4, 6), 1, 0);
        assert!(ok && rows.is_empty());

        let mut m = ZeroOneMatrix::filled(4, 6);
        for x in 1..=6 {
            m.set(3, x, false);
        }
        let (ok, rows) = check_max_run_rows(&m, 5, 1);
        assert!(ok);
        assert_eq!(rows, vec![3]);
        let (ok, _) = check_max_run_rows(&m, 5, 0);
        assert!(!ok);
    }

    #[test]
    fn max_run_probability_dominates_union_bound() {
        // Pr(every run <= t) >= 1 - rows * cols * 2^-(t+1). At threshold
        // ceil(ln^2 6) = 4 the union bound is vacuous for a 12x100 matrix
        // (expected long-run count ~ 37, so the event essentially never
        // holds); at threshold 10 the bound bites.
        let trials = 2000u64;
        for (threshold, rows, cols) in [(4usize, 12usize, 100usize), (10, 12, 100)] {
            let mut holds = 0u64;
            for t in 0..trials {
                let m =
                    ZeroOneMatrix::random(rows, cols, rng::derive_seed(606 + threshold as u64, t));
                if check_max_run(&m, threshold).0 {
                    holds += 1;
                }
            }
            let empirical = holds as f64 / trials as f64;
            let union_bound = rows as f64 * cols as f64 * 0.5f64.powi(threshold as i32 + 1);
            let floor = (1.0 - union_bound).max(0.0);
            let sigma = (0.25f64 / trials as f64).sqrt();
            assert!(
                empirical >= floor - 3.0 * sigma,
                "threshold {threshold}: empirical {empirical} below {floor}"
            );
            if threshold == 10 {
                assert!(floor > 0.0, "bound should be informative here");
            }
        }
    }

    #[test]
    fn exception_free_row_check_matches_max_run() {
        for seed in 0..40 {
            let m = ZeroOneMatrix::random(6, 40, seed);
            for threshold in [1, 2, 4, 8] {
                let (a, _) = check_max_run(&m, threshold);
                let (a_rows, _) = check_max_run_rows(&m, threshold, 0);
                assert_eq!(a, a_rows);
            }
        }
    }

    #[test]
    fn placement_run_sum_examples() {
        let ones = ZeroOneMatrix::filled(6, 9);
        assert_eq!(
            placement_run_sum(&ones, &[(1, 1), (2, 5), (3, 9)], 2).unwrap(),
            0
        );

        let fig1 = figure1();
        assert_eq!(
            placement_run_sum(&fig1, &[(5, 3)], 0).unwrap(),
            run_length(&fig1, 5, 3).unwrap()
        );
        assert_eq!(
            placement_run_sum(&fig1, &[(1, 1), (1, 2)], 0),
            Err(ScanError::DuplicateRow)
        );
        assert!(placement_run_sum(&fig1, &[(6, 1)], 1).is_err());
    }

    #[test]
    fn placement_run_sum_tail_dominated_by_exact_bound() {
        // Truncation at the right edge only lowers the sum, so the empirical
        // tail sits below the untruncated exact tail.
        let trials = 100_000u64;
        let placement = [(1usize, 3usize), (2, 9), (3, 1), (4, 14), (5, 6)];
        let mut hits = 0u64;
        for t in 0..trials {
            let m = ZeroOneMatrix::random(8, 50, rng::derive_seed(404, t));
            if placement_run_sum(&m, &placement, 2).unwrap() >= 20 {
                hits += 1;
            }
        }
        let empirical = hits as f64 / trials as f64;
        let bound = negative_binomial_tail(5, 20);
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        assert!(
            empirical <= bound + 3.0 * sigma,
            "empirical {empirical} vs bound {bound}"
        );
    }

    #[test]
    fn run_length_mean_matches_geometric() {
        // Positions away from the right edge of a large random matrix.
        let m = ZeroOneMatrix::random(200, 1000, 31);
        let mut rng_seed = 77u64;
        let samples = 100_000;
        let mut total = 0usize;
        for _ in 0..samples {
            rng_seed = rng::splitmix64(rng_seed);
            let y = (rng_seed as usize % 200) + 1;
            let x = (rng_seed as usize >> 32) % 900 + 1;
            total += run_length(&m, y, x).unwrap();
        }
        let mean = total as f64 / samples as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
    }

    /// Oracle: does any strictly increasing column choice place `pi` in rows
    /// `t+1 ..= t+k`?
    fn window_copy_exists(m: &ZeroOneMatrix, pi: &Permutation, t: usize) -> bool {
        fn rec(m: &ZeroOneMatrix, pi: &Permutation, t: usize, j: usize, col: usize) -> bool {
            if j > pi.len() {
                return true;
            }
            for c in col..=m.cols() {
                if m.get(t + pi.at(j), c) && rec(m, pi, t, j + 1, c + 1) {
                    return true;
                }
            }
            false
        }
        rec(m, pi, t, 1, 1)
    }

    #[test]
    fn scan_complete_on_its_row_window() {
        for seed in 0..300 {
            let m = ZeroOneMatrix::random(6, 8, seed);
            let pi = Permutation::random(3, seed.wrapping_add(9));
            for t in 1..=3 {
                let tr = scan_thread(&m, &pi, t, None).unwrap();
                assert_eq!(
                    tr.success,
                    window_copy_exists(&m, &pi, t),
                    "seed {seed} t {t}"
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn exposure_bounded_and_one_per_column(
            rows in 4usize..10,
            cols in 1usize..40,
            seed in any::<u64>(),
            k in 1usize..4,
            cap in proptest::option::of(1usize..5),
        ) {
            prop_assume!(rows > k);
            let m = ZeroOneMatrix::random(rows, cols, seed);
            let pi = Permutation::random(k, seed.wrapping_add(1));
            let tr = scan_thread(&m, &pi, 1, cap).unwrap();
            prop_assert!(tr.exposed.len() <= cols);
            let mut cols_seen = std::collections::HashSet::new();
            for &(_, x) in &tr.exposed {
                prop_assert!(cols_seen.insert(x));
            }
            if !tr.success && cap.is_none() {
                prop_assert_eq!(tr.exposed.len(), cols);
            }
        }

        #[test]
        fn uncapped_success_implies_containment(
            rows in 4usize..10,
            cols in 4usize..30,
            seed in any::<u64>(),
            k in 1usize..4,
        ) {
            prop_assume!(rows > k);
            let m = ZeroOneMatrix::random(rows, cols, seed);
            let pi = Permutation::random(k, seed.wrapping_add(2));
            let tr = scan_thread(&m, &pi, 1, None).unwrap();
            if tr.success {
                let w = tr.witness.unwrap();
                for &(y, x) in &w {
                    prop_assert!(m.get(y, x));
                }
                for (j, &(y, _)) in w.iter().enumerate() {
                    prop_assert_eq!(y, 1 + pi.at(j + 1));
                }
                prop_assert!(w.windows(2).all(|p| p[0].1 < p[1].1));
                prop_assert!(m.contains_permutation(&pi).is_some());
            }
        }
    }
}
