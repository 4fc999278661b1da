//! Permutations in one-line notation, pattern containment, longest increasing
//! subsequences, uniform sampling, and the binomial length lower bound for
//! universality.
//!
//! Positions and values are 1-based throughout the public API, matching the
//! text format (`"2,5,3,1,4"`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rng;

/// Cap on `k` for exhaustive `k!` pattern enumeration.
pub const DEFAULT_UNIVERSALITY_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("values are not a bijection on 1..={n}: {reason}")]
    NotABijection { n: usize, reason: String },
    #[error("pattern of length {pattern} is longer than host of length {host}")]
    PatternTooLong { pattern: usize, host: usize },
    #[error("k = {k} exceeds the exhaustive-universality cap {cap}")]
    KTooLarge { k: usize, cap: usize },
    #[error("uniforms contain a tie or non-finite value at index {index}")]
    DuplicateUniform { index: usize },
    #[error("invalid permutation text: {0}")]
    Parse(String),
}

/// A permutation of `{1..n}` in one-line notation: `values[i]` is the image
/// of position `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    values: Vec<usize>,
}

/// Positions `x_1 < … < x_k` in a host permutation whose values are ordered
/// like the pattern's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentWitness {
    pub indices: Vec<usize>,
}

impl ContainmentWitness {
    /// Re-check the defining order condition against the host and pattern.
    pub fn verify(&self, host: &Permutation, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if self.indices.len() != k {
            return false;
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.indices.iter().any(|&x| x < 1 || x > host.len()) {
            return false;
        }
        for i in 0..k {
            for j in 0..k {
                let host_order = host.at(self.indices[i]) < host.at(self.indices[j]);
                let pat_order = pattern.at(i + 1) < pattern.at(j + 1);
                if host_order != pat_order {
                    return false;
                }
            }
        }
        true
    }
}

impl Permutation {
    /// Validate one-line values as a bijection on `1..=n`.
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v < 1 || v > n {
                return Err(PermError::NotABijection {
                    n,
                    reason: format!("value {v} out of range"),
                });
            }
            if seen[v - 1] {
                return Err(PermError::NotABijection {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n).collect(),
        }
    }

    /// The decreasing permutation `n, n-1, …, 1`.
    pub fn decreasing(n: usize) -> Self {
        Permutation {
            values: (1..=n).rev().collect(),
        }
    }

    /// The tilted grid on `k = ell^2` points: position `a*ell + b + 1` maps to
    /// `b*ell + a + 1` for `0 <= a, b < ell`. Short monotone subsequences but
    /// heavily self-similar under value shifts.
    pub fn tilted_grid(ell: usize) -> Self {
        let mut values = vec![0; ell * ell];
        for a in 0..ell {
            for b in 0..ell {
                values[a * ell + b] = b * ell + a + 1;
            }
        }
        Permutation { values }
    }

    /// Uniformly random permutation of `1..=n`; a pure function of `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = rng::rng_from_seed(seed);
        let mut values: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            values.swap(i, j);
        }
        Permutation { values }
    }

    /// The permutation sorting the given distinct reals: the result sigma
    /// satisfies `u[sigma(1)-1] < u[sigma(2)-1] < …`.
    pub fn from_uniforms(u: &[f64]) -> Result<Self, PermError> {
        for (i, x) in u.iter().enumerate() {
            if !x.is_finite() {
                return Err(PermError::DuplicateUniform { index: i + 1 });
            }
        }
        let mut order: Vec<usize> = (0..u.len()).collect();
        order.sort_by(|&a, &b| u[a].partial_cmp(&u[b]).unwrap());
        for w in order.windows(2) {
            if u[w[0]] == u[w[1]] {
                return Err(PermError::DuplicateUniform { index: w[1] + 1 });
            }
        }
        Ok(Permutation {
            values: order.into_iter().map(|i| i + 1).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Image of 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.values[pos - 1]
    }

    /// One-line values (1-based images in position order).
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            values: self.inverse_vec(),
        }
    }

    /// `out[v-1]` = position of value `v`.
    fn inverse_vec(&self) -> Vec<usize> {
        let mut inv = vec![0; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        inv
    }

    /// Position of value `v` (1-based); `v` must be in range.
    pub fn position_of(&self, v: usize) -> usize {
        self.values.iter().position(|&x| x == v).unwrap() + 1
    }

    /// Exact pattern containment. Returns a witness iff some `k` positions of
    /// `self` are ordered like `pattern`; `None` otherwise.
    ///
    /// Backtracking search placing pattern values in increasing order with
    /// position-interval pruning. Worst case exponential; exact always.
    pub fn contains_pattern(
        &self,
        pattern: &Permutation,
    ) -> Result<Option<ContainmentWitness>, PermError> {
        let n = self.len();
        let k = pattern.len();
        if k > n {
            return Err(PermError::PatternTooLong {
                pattern: k,
                host: n,
            });
        }
        if k == 0 {
            return Ok(Some(ContainmentWitness { indices: vec![] }));
        }
        let host_pos_of_value = self.inverse_vec();
        let pat_index_of_value = pattern.inverse_vec();
        let mut search = ContainmentSearch {
            host_pos_of_value: &host_pos_of_value,
            pat_index_of_value: &pat_index_of_value,
            chosen: vec![0; k],
            n,
            k,
        };
        if search.place(1, 1) {
            Ok(Some(ContainmentWitness {
                indices: search.chosen,
            }))
        } else {
            Ok(None)
        }
    }

    /// Length of the longest strictly increasing subsequence of the values.
    pub fn lis(&self) -> usize {
        lis_length_of(&self.values)
    }

    /// Exhaustively check containment of every pattern in `S_k`.
    pub fn is_k_universal(&self, k: usize) -> Result<UniversalityReport, PermError> {
        self.is_k_universal_capped(k, DEFAULT_UNIVERSALITY_CAP)
    }

    pub fn is_k_universal_capped(
        &self,
        k: usize,
        cap: usize,
    ) -> Result<UniversalityReport, PermError> {
        if k > cap {
            return Err(PermError::KTooLarge { k, cap });
        }
        let mut missing = Vec::new();
        for pattern in all_permutations(k) {
            if self.contains_pattern(&pattern)?.is_none() {
                missing.push(pattern);
            }
        }
        Ok(UniversalityReport {
            universal: missing.is_empty(),
            missing,
        })
    }
}

/// Outcome of an exhaustive universality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityReport {
    pub universal: bool,
    /// Exhaustive list of patterns of `S_k` the host does not contain.
    pub missing: Vec<Permutation>,
}

struct ContainmentSearch<'a> {
    host_pos_of_value: &'a [usize],
    pat_index_of_value: &'a [usize],
    /// `chosen[j-1]` = host position assigned to pattern index `j`, 0 if unset.
    chosen: Vec<usize>,
    n: usize,
    k: usize,
}

impl ContainmentSearch<'_> {
    /// Place pattern value `v` using host values `>= min_host_value`.
    fn place(&mut self, v: usize, min_host_value: usize) -> bool {
        if v > self.k {
            return true;
        }
        let j = self.pat_index_of_value[v - 1];
        let mut lo = 0;
        let mut hi = self.n + 1;
        for (idx, &p) in self.chosen.iter().enumerate() {
            if p == 0 {
                continue;
            }
            if idx + 1 < j {
                lo = lo.max(p);
            } else {
                hi = hi.min(p);
            }
        }
        // Host values left must cover the pattern values left.
        let max_w = self.n - (self.k - v);
        for w in min_host_value..=max_w {
            let p = self.host_pos_of_value[w - 1];
            if p > lo && p < hi {
                self.chosen[j - 1] = p;
                if self.place(v + 1, w + 1) {
                    return true;
                }
                self.chosen[j - 1] = 0;
            }
        }
        false
    }
}

/// Length of the longest strictly increasing subsequence via patience piles.
pub fn lis_length_of(seq: &[usize]) -> usize {
    let mut tops: Vec<usize> = Vec::new();
    for &x in seq {
        let pile = tops.partition_point(|&t| t < x);
        if pile == tops.len() {
            tops.push(x);
        } else {
            tops[pile] = x;
        }
    }
    tops.len()
}

/// Indices (0-based) of one maximal strictly increasing subsequence.
///
/// Patience piles with predecessor links; the reconstruction starts from the
/// first element that opened the final pile, so ties resolve toward earlier
/// positions.
pub fn lis_indices_of(seq: &[usize]) -> Vec<usize> {
    if seq.is_empty() {
        return Vec::new();
    }
    let mut top_idx: Vec<usize> = Vec::new();
    let mut pile_of: Vec<usize> = Vec::with_capacity(seq.len());
    let mut pred: Vec<Option<usize>> = Vec::with_capacity(seq.len());
    for (i, &x) in seq.iter().enumerate() {
        let pile = top_idx.partition_point(|&t| seq[t] < x);
        pred.push(if pile > 0 {
            Some(top_idx[pile - 1])
        } else {
            None
        });
        if pile == top_idx.len() {
            top_idx.push(i);
        } else {
            top_idx[pile] = i;
        }
        pile_of.push(pile);
    }
    let last_pile = top_idx.len() - 1;
    let start = pile_of.iter().position(|&p| p == last_pile).unwrap();
    let mut chain = Vec::with_capacity(top_idx.len());
    let mut cur = Some(start);
    while let Some(i) = cur {
        chain.push(i);
        cur = pred[i];
    }
    chain.reverse();
    chain
}

/// All permutations of `S_k` in lexicographic one-line order.
pub fn all_permutations(k: usize) -> impl Iterator<Item = Permutation> {
    let mut state: Option<Vec<usize>> = Some((1..=k).collect());
    std::iter::from_fn(move || {
        let current = state.take()?;
        let mut next = current.clone();
        if next_permutation(&mut next) {
            state = Some(next);
        }
        Some(Permutation { values: current })
    })
}

/// In-place lexicographic successor; false when `values` was the last one.
fn next_permutation(values: &mut [usize]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let mut i = values.len() - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = values.len() - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// Smallest `n` with `C(n, k) >= k!`, the counting lower bound on the length
/// of a `k`-universal permutation. Exact big-integer comparison at the
/// boundary.
pub fn min_length_lower_bound(k: usize) -> usize {
    assert!(k >= 1, "k must be positive");
    let target = factorial_big(k);
    let mut hi = k;
    while binomial_big(hi, k) < target {
        hi *= 2;
    }
    let mut lo = k; // C(lo, k) may already reach the target only when k <= 1
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if binomial_big(mid, k) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

fn factorial_big(k: usize) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

impl fmt::Display for Permutation {
    /// One-line notation: comma-separated values, empty string for `n = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(Permutation { values: vec![] });
        }
        let values = trimmed
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| PermError::Parse(format!("bad value {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    /// Brute-force containment oracle: try every index k-subset.
    pub(crate) fn contains_by_brute_force(host: &Permutation, pattern: &Permutation) -> bool {
        let n = host.len();
        let k = pattern.len();
        if k > n {
            return false;
        }
        let mut subset: Vec<usize> = (1..=k).collect();
        loop {
            let witness = ContainmentWitness {
                indices: subset.clone(),
            };
            if witness.verify(host, pattern) {
                return true;
            }
            // next k-combination of 1..=n
            let mut i = k;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if subset[i] < n - (k - 1 - i) {
                    subset[i] += 1;
                    for j in i + 1..k {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Exhaustive LIS oracle over all subsequences (for tiny inputs).
    fn lis_by_enumeration(seq: &[usize]) -> usize {
        let n = seq.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let picked: Vec<usize> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| seq[i])
                .collect();
            if picked.windows(2).all(|w| w[0] < w[1]) {
                best = best.max(picked.len());
            }
        }
        best
    }

    #[test]
    fn make_permutation_examples() {
        assert_eq!(perm("1").len(), 1);
        assert_eq!(perm("2,5,3,1,4").len(), 5);
        assert!(matches!(
            Permutation::new(vec![1, 1, 2]),
            Err(PermError::NotABijection { .. })
        ));
        assert!(matches!(
            Permutation::new(vec![1, 5, 2]),
            Err(PermError::NotABijection { .. })
        ));
    }

    #[test]
    fn containment_examples() {
        let w = perm("2,5,3,1,4")
            .contains_pattern(&perm("3,2,1"))
            .unwrap()
            .unwrap();
        assert_eq!(w.indices, vec![2, 3, 4]);
        assert!(contains_by_brute_force(&perm("2,5,3,1,4"), &perm("3,2,1")));

        let id8 = Permutation::identity(8);
        let w = id8
            .contains_pattern(&Permutation::identity(5))
            .unwrap()
            .unwrap();
        assert_eq!(w.indices, vec![1, 2, 3, 4, 5]);

        assert!(perm("1,2,3")
            .contains_pattern(&perm("2,1"))
            .unwrap()
            .is_none());

        assert_eq!(
            perm("1,2").contains_pattern(&perm("1,3,2")),
            Err(PermError::PatternTooLong {
                pattern: 3,
                host: 2
            })
        );
    }

    #[test]
    fn containment_matches_brute_force_on_small_hosts() {
        // Host lengths up to 6 here; the full n <= 7, k <= 4 sweep runs as an
        // integration test.
        for n in 0..=5 {
            for sigma in all_permutations(n) {
                for k in 0..=3.min(n) {
                    for pi in all_permutations(k) {
                        let fast = sigma.contains_pattern(&pi).unwrap();
                        let slow = contains_by_brute_force(&sigma, &pi);
                        assert_eq!(fast.is_some(), slow, "sigma={sigma} pi={pi}");
                        if let Some(w) = fast {
                            assert!(w.verify(&sigma, &pi));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lis_examples() {
        assert_eq!(Permutation::identity(9).lis(), 9);
        assert_eq!(Permutation::decreasing(9).lis(), 1);
        assert_eq!(perm("1,3,2,4").lis(), 3);
        assert_eq!(lis_by_enumeration(&[1, 3, 2, 4]), 3);
        assert_eq!(Permutation::identity(0).lis(), 0);
    }

    #[test]
    fn lis_indices_reconstruct_a_valid_maximal_subsequence() {
        for seed in 0..50 {
            let p = Permutation::random(40, seed);
            let idx = lis_indices_of(p.values());
            assert_eq!(idx.len(), p.lis());
            assert!(idx.windows(2).all(|w| w[0] < w[1]));
            assert!(idx.windows(2).all(|w| p.values()[w[0]] < p.values()[w[1]]));
        }
    }

    #[test]
    fn universality_examples() {
        let r = perm("2,5,3,1,4").is_k_universal(3).unwrap();
        assert!(r.universal, "missing: {:?}", r.missing);

        for sigma in all_permutations(4) {
            assert!(!sigma.is_k_universal(3).unwrap().universal);
        }

        let r = Permutation::identity(6).is_k_universal(2).unwrap();
        assert!(!r.universal);
        assert_eq!(r.missing, vec![perm("2,1")]);

        assert_eq!(
            Permutation::identity(10).is_k_universal(9),
            Err(PermError::KTooLarge { k: 9, cap: 8 })
        );
    }

    #[test]
    fn universal_implies_counting_bound() {
        for sigma in all_permutations(5) {
            if sigma.is_k_universal(3).unwrap().universal {
                assert!(sigma.len() >= min_length_lower_bound(3));
            }
        }
    }

    #[test]
    fn random_permutation_edge_cases() {
        assert_eq!(Permutation::random(1, 7).values(), &[1]);
        assert_eq!(Permutation::random(0, 7).len(), 0);
        // pure function of seed
        assert_eq!(Permutation::random(20, 5), Permutation::random(20, 5));
        assert_ne!(Permutation::random(20, 5), Permutation::random(20, 6));
    }

    #[test]
    fn random_permutation_is_uniform_chi_square() {
        // 60000 samples over S_3; chi-square with 5 degrees of freedom.
        // Critical value at significance 1e-3 is 20.515.
        let trials = 60_000;
        let mut counts = std::collections::HashMap::new();
        for t in 0..trials {
            let p = Permutation::random(3, crate::rng::derive_seed(123, t));
            *counts.entry(p.to_string()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = trials as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 <= 20.515, "chi-square statistic {chi2} too large");
    }

    #[test]
    fn from_uniforms_examples() {
        assert_eq!(
            Permutation::from_uniforms(&[0.1, 0.5, 0.3]).unwrap(),
            perm("1,3,2")
        );
        assert_eq!(
            Permutation::from_uniforms(&[0.2, 0.4, 0.6, 0.8]).unwrap(),
            Permutation::identity(4)
        );
        assert_eq!(
            Permutation::from_uniforms(&[0.8, 0.6, 0.4, 0.2]).unwrap(),
            Permutation::decreasing(4)
        );
        assert!(matches!(
            Permutation::from_uniforms(&[0.3, 0.3]),
            Err(PermError::DuplicateUniform { .. })
        ));
        assert!(Permutation::from_uniforms(&[0.1, f64::NAN]).is_err());
    }

    #[test]
    fn min_length_lower_bound_examples() {
        assert_eq!(min_length_lower_bound(1), 1);
        assert_eq!(min_length_lower_bound(2), 3);
        assert_eq!(min_length_lower_bound(3), 5);
        // boundary is exact: C(n*, k) >= k! > C(n* - 1, k)
        for k in 1..=12 {
            let n = min_length_lower_bound(k);
            let target = factorial_big(k);
            assert!(binomial_big(n, k) >= target);
            if n > k {
                assert!(binomial_big(n - 1, k) < target);
            }
        }
    }

    #[test]
    fn tilted_grid_examples() {
        assert_eq!(Permutation::tilted_grid(1), perm("1"));
        assert_eq!(Permutation::tilted_grid(2), perm("1,3,2,4"));
        let g3 = Permutation::tilted_grid(3);
        assert_eq!(g3, perm("1,4,7,2,5,8,3,6,9"));
        assert_eq!(g3.lis(), 5);
        assert_eq!(lis_by_enumeration(g3.values()), 5);
    }

    #[test]
    fn all_permutations_counts_and_order() {
        assert_eq!(all_permutations(0).count(), 1);
        assert_eq!(all_permutations(4).count(), 24);
        let first: Vec<String> = all_permutations(3).take(2).map(|p| p.to_string()).collect();
        assert_eq!(first, vec!["1,2,3", "1,3,2"]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1,2,x".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
        assert!("99999999999999999999999".parse::<Permutation>().is_err());
        assert_eq!("".parse::<Permutation>().unwrap().len(), 0);
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in 0usize..40, seed in any::<u64>()) {
            let p = Permutation::random(n, seed);
            let back: Permutation = p.to_string().parse().unwrap();
            prop_assert_eq!(p, back);
        }

        #[test]
        fn witnesses_always_verify(n in 1usize..10, k_seed in any::<usize>(), seed in any::<u64>()) {
            let k = 1 + k_seed % n.min(4);
            let sigma = Permutation::random(n, seed);
            let pi = Permutation::random(k, seed.wrapping_add(1));
            if let Some(w) = sigma.contains_pattern(&pi).unwrap() {
                prop_assert!(w.verify(&sigma, &pi));
            }
        }

        #[test]
        fn identity_pattern_iff_lis(n in 1usize..30, k_seed in any::<usize>(), seed in any::<u64>()) {
            let k = 1 + k_seed % n.min(7);
            let sigma = Permutation::random(n, seed);
            let has = sigma.contains_pattern(&Permutation::identity(k)).unwrap().is_some();
            prop_assert_eq!(has, sigma.lis() >= k);
        }

        #[test]
        fn inverse_composes_to_identity(n in 0usize..30, seed in any::<u64>()) {
            let p = Permutation::random(n, seed);
            let inv = p.inverse();
            for pos in 1..=n {
                prop_assert_eq!(inv.at(p.at(pos)), pos);
            }
        }
    }
}
