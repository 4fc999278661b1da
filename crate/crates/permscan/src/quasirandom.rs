//! Shift self-similarity statistics.
//!
//! A set `A` is a `delta`-shift of `B` in an injection `phi` when their
//! sorted elements pair up with `phi(a_i) = phi(b_i) + delta`. The maximal
//! shift length `L_delta` is the longest increasing subsequence of the
//! partner map `i -> phi^-1(phi(i) + delta)`; these lengths bound how much
//! two scanning threads at offset difference `delta` can overlap.
//!
//! Thresholds of the form `L >= alpha * k` are compared with exact rational
//! arithmetic so that predicate outcomes never depend on float rounding.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::perm::{lis_indices_of, lis_length_of, Permutation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuasirandomError {
    #[error("delta = {delta} out of range 1..={k}")]
    DeltaOutOfRange { delta: usize, k: usize },
    #[error("no shift of length >= 1 exists here")]
    NoShift,
    #[error("invalid partial map: {0}")]
    InvalidMap(String),
    #[error("invalid ratio: {0}")]
    ParseRatio(String),
}

/// An exact nonnegative rational, used for `alpha * k` thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        if num == 0 {
            return Ratio { num: 0, den: 1 };
        }
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `l >= self * k`, exactly.
    pub fn meets(&self, l: usize, k: usize) -> bool {
        (l as u128) * self.den as u128 >= self.num as u128 * k as u128
    }

    /// `l > self * k`, exactly.
    pub fn exceeds(&self, l: usize, k: usize) -> bool {
        (l as u128) * self.den as u128 > self.num as u128 * k as u128
    }

    /// `l >= self * k / 2`, exactly.
    pub fn half_meets(&self, l: usize, k: usize) -> bool {
        2 * l as u128 * self.den as u128 >= self.num as u128 * k as u128
    }

    /// Smallest integer `>= self * k`.
    pub fn ceil_times(&self, k: usize) -> usize {
        let num = self.num as u128 * k as u128;
        num.div_ceil(self.den as u128) as usize
    }

    pub fn doubled(&self) -> Ratio {
        Ratio::new(self.num * 2, self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Ratio {
    type Err = QuasirandomError;

    /// Accepts `"p/q"`, decimals like `"0.25"`, and plain integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |m: &str| QuasirandomError::ParseRatio(format!("{m}: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let num: u64 = p.trim().parse().map_err(|_| bad("bad numerator"))?;
            let den: u64 = q.trim().parse().map_err(|_| bad("bad denominator"))?;
            if den == 0 {
                return Err(bad("zero denominator"));
            }
            return Ok(Ratio::new(num, den));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("bad decimal"));
            }
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad("bad integer part"))?
            };
            let den = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad("bad fraction part"))?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(|| bad("overflow"))?;
            return Ok(Ratio::new(num, den));
        }
        let num: u64 = s.parse().map_err(|_| bad("bad integer"))?;
        Ok(Ratio::new(num, 1))
    }
}

/// An injection from a subset of `1..=k` into `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    k: usize,
    /// `(position, value)`, sorted by position.
    pairs: Vec<(usize, usize)>,
    /// `value_to_pos[v]` = position mapped to `v`, 0 if none.
    value_to_pos: Vec<usize>,
}

impl PartialMap {
    pub fn new(k: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self, QuasirandomError> {
        pairs.sort_unstable();
        let mut value_to_pos = vec![0; k + 1];
        let mut last_pos = 0;
        for &(pos, val) in &pairs {
            if pos < 1 || pos > k || val < 1 || val > k {
                return Err(QuasirandomError::InvalidMap(format!(
                    "entry {pos}:{val} outside 1..={k}"
                )));
            }
            if pos == last_pos {
                return Err(QuasirandomError::InvalidMap(format!(
                    "position {pos} mapped twice"
                )));
            }
            if value_to_pos[val] != 0 {
                return Err(QuasirandomError::InvalidMap(format!(
                    "value {val} taken twice"
                )));
            }
            value_to_pos[val] = pos;
            last_pos = pos;
        }
        Ok(PartialMap {
            k,
            pairs,
            value_to_pos,
        })
    }

    pub fn from_permutation(pi: &Permutation) -> Self {
        let k = pi.len();
        let pairs = (1..=k).map(|i| (i, pi.at(i))).collect();
        Self::new(k, pairs).expect("a permutation is a valid map")
    }

    /// Restriction of `pi` to the positions in `domain`.
    pub fn restriction(pi: &Permutation, domain: &[usize]) -> Self {
        let pairs = domain.iter().map(|&i| (i, pi.at(i))).collect();
        Self::new(pi.len(), pairs).expect("restriction of a permutation is valid")
    }

    pub fn ambient(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(position, value)` entries sorted by position.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(p, _)| p).collect()
    }

    pub fn value_at(&self, pos: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&pos, |&(p, _)| p)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn position_of_value(&self, val: usize) -> Option<usize> {
        if val < 1 || val > self.k {
            return None;
        }
        match self.value_to_pos[val] {
            0 => None,
            p => Some(p),
        }
    }

    /// Serialize as `"x:v"` pairs, comma separated, sorted by position.
    pub fn to_text(&self) -> String {
        self.pairs
            .iter()
            .map(|&(p, v)| format!("{p}:{v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the `"x:v,x:v"` form; the ambient size is external to the text.
    pub fn parse(k: usize, s: &str) -> Result<Self, QuasirandomError> {
        let s = s.trim();
        if s.is_empty() {
            return Self::new(k, vec![]);
        }
        let mut pairs = Vec::new();
        for tok in s.split(',') {
            let (p, v) = tok
                .split_once(':')
                .ok_or_else(|| QuasirandomError::InvalidMap(format!("bad entry {tok:?}")))?;
            let pos = p
                .trim()
                .parse::<usize>()
                .map_err(|e| QuasirandomError::InvalidMap(format!("bad position {p:?}: {e}")))?;
            let val = v
                .trim()
                .parse::<usize>()
                .map_err(|e| QuasirandomError::InvalidMap(format!("bad value {v:?}: {e}")))?;
            pairs.push((pos, val));
        }
        Self::new(k, pairs)
    }
}

/// A maximal aligned pair list certifying a shift: `phi(a_i) = phi(b_i) +
/// delta` with both coordinate sequences strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftWitness {
    pub delta: usize,
    /// `(b_i, a_i)` pairs.
    pub pairs: Vec<(usize, usize)>,
}

impl ShiftWitness {
    /// Re-check the defining relation and monotonicity against `phi`.
    pub fn verify_on(&self, phi: &PartialMap) -> bool {
        if self
            .pairs
            .windows(2)
            .any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1)
        {
            return false;
        }
        self.pairs
            .iter()
            .all(|&(b, a)| match (phi.value_at(b), phi.value_at(a)) {
                (Some(vb), Some(va)) => va == vb + self.delta,
                _ => false,
            })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn check_delta(delta: usize, k: usize) -> Result<(), QuasirandomError> {
    if delta < 1 || delta > k {
        return Err(QuasirandomError::DeltaOutOfRange { delta, k });
    }
    Ok(())
}

/// The partner map `i -> phi^-1(phi(i) + delta)` as sorted `(i, g(i))`
/// pairs over the positions where it is defined.
pub fn shift_partner_map(
    phi: &PartialMap,
    delta: usize,
) -> Result<Vec<(usize, usize)>, QuasirandomError> {
    check_delta(delta, phi.ambient())?;
    Ok(phi
        .pairs()
        .iter()
        .filter_map(|&(pos, val)| {
            phi.position_of_value(val + delta)
                .map(|partner| (pos, partner))
        })
        .collect())
}

/// Maximal shift length: the LIS of the partner map's values.
pub fn l_delta(phi: &PartialMap, delta: usize) -> Result<usize, QuasirandomError> {
    let g = shift_partner_map(phi, delta)?;
    let values: Vec<usize> = g.into_iter().map(|(_, a)| a).collect();
    Ok(lis_length_of(&values))
}

/// Maximal shift length of the full permutation with the upper side
/// restricted to `x_set`: the largest aligned system with `A` inside
/// `x_set` and `B` anywhere.
pub fn l_delta_restricted(
    pi: &Permutation,
    x_set: &[usize],
    delta: usize,
) -> Result<usize, QuasirandomError> {
    let g = restricted_partner_values(pi, x_set, delta)?;
    Ok(lis_length_of(&g))
}

fn restricted_partner_values(
    pi: &Permutation,
    x_set: &[usize],
    delta: usize,
) -> Result<Vec<usize>, QuasirandomError> {
    let k = pi.len();
    check_delta(delta, k)?;
    let mut in_x = vec![false; k + 1];
    for &x in x_set {
        assert!(x >= 1 && x <= k, "set element {x} outside 1..={k}");
        in_x[x] = true;
    }
    let inv = pi.inverse();
    Ok((1..=k)
        .filter_map(|i| {
            let v = pi.at(i);
            if v + delta <= k {
                let a = inv.at(v + delta);
                if in_x[a] {
                    return Some(a);
                }
            }
            None
        })
        .collect())
}

/// Recover one maximal shift witness on `phi`.
pub fn shift_witness(phi: &PartialMap, delta: usize) -> Result<ShiftWitness, QuasirandomError> {
    let g = shift_partner_map(phi, delta)?;
    let values: Vec<usize> = g.iter().map(|&(_, a)| a).collect();
    if values.is_empty() || lis_length_of(&values) == 0 {
        return Err(QuasirandomError::NoShift);
    }
    let picked = lis_indices_of(&values);
    Ok(ShiftWitness {
        delta,
        pairs: picked.into_iter().map(|i| g[i]).collect(),
    })
}

/// Recover one maximal restricted shift witness: `a`-sides inside `x_set`,
/// `b`-sides anywhere in the permutation.
pub fn shift_witness_restricted(
    pi: &Permutation,
    x_set: &[usize],
    delta: usize,
) -> Result<ShiftWitness, QuasirandomError> {
    let k = pi.len();
    check_delta(delta, k)?;
    let mut in_x = vec![false; k + 1];
    for &x in x_set {
        in_x[x] = true;
    }
    let inv = pi.inverse();
    let mut g: Vec<(usize, usize)> = Vec::new();
    for i in 1..=k {
        let v = pi.at(i);
        if v + delta <= k {
            let a = inv.at(v + delta);
            if in_x[a] {
                g.push((i, a));
            }
        }
    }
    let values: Vec<usize> = g.iter().map(|&(_, a)| a).collect();
    if values.is_empty() {
        return Err(QuasirandomError::NoShift);
    }
    let picked = lis_indices_of(&values);
    Ok(ShiftWitness {
        delta,
        pairs: picked.into_iter().map(|i| g[i]).collect(),
    })
}

/// Is `x_set` `(alpha, q)`-quasirandom in `pi`: do fewer than `q` deltas
/// reach `L_delta(pi, x_set) >= alpha * k`? Returns the verdict and the set
/// of offending deltas.
pub fn is_quasirandom_set(
    pi: &Permutation,
    x_set: &[usize],
    alpha: Ratio,
    q: usize,
) -> (bool, BTreeSet<usize>) {
    let k = pi.len();
    let mut bad = BTreeSet::new();
    for delta in 1..=k {
        let l = l_delta_restricted(pi, x_set, delta).expect("delta in range");
        if alpha.meets(l, k) {
            bad.insert(delta);
        }
    }
    (bad.len() < q, bad)
}

/// Is the map itself `(alpha, q)`-quasirandom: do fewer than `q` deltas
/// reach `L_delta(phi) >= alpha * k` (with `k` the ambient size)?
pub fn is_quasirandom_map(phi: &PartialMap, alpha: Ratio, q: usize) -> (bool, BTreeSet<usize>) {
    let k = phi.ambient();
    let mut bad = BTreeSet::new();
    for delta in 1..=k {
        let l = l_delta(phi, delta).expect("delta in range");
        if alpha.meets(l, k) {
            bad.insert(delta);
        }
    }
    (bad.len() < q, bad)
}

/// Largest `L_delta` over all deltas (0 for the empty permutation).
pub fn max_l_delta(pi: &Permutation) -> usize {
    let phi = PartialMap::from_permutation(pi);
    (1..=pi.len())
        .map(|d| l_delta(&phi, d).expect("delta in range"))
        .max()
        .unwrap_or(0)
}

/// True iff every shift length satisfies `L_delta <= 3 * sqrt(k)`, compared
/// exactly as `L^2 <= 9k`. Almost all permutations qualify.
pub fn has_bounded_shifts(pi: &Permutation) -> bool {
    let k = pi.len();
    let phi = PartialMap::from_permutation(pi);
    (1..=k).all(|d| {
        let l = l_delta(&phi, d).expect("delta in range");
        l * l <= 9 * k
    })
}

/// The union-bound probability that a uniform permutation has some shift of
/// length at least `L`: exactly `k * C(k, L) / L!` and its closed-form
/// relaxation `k * (e^2 k / L^2)^L`, both as natural logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftTailBound {
    pub ln_exact: f64,
    pub ln_simplified: f64,
}

impl ShiftTailBound {
    pub fn exact(&self) -> f64 {
        self.ln_exact.exp()
    }

    pub fn simplified(&self) -> f64 {
        self.ln_simplified.exp()
    }
}

pub fn random_l_bound(k: usize, l: usize) -> ShiftTailBound {
    assert!(l >= 1 && l <= k, "need 1 <= L <= k");
    let ln_k = (k as f64).ln();
    let ln_l_fact: f64 = (1..=l).map(|i| (i as f64).ln()).sum();
    // ln C(k, L) = sum ln(k - i) - ln L!
    let ln_binom: f64 = (0..l).map(|i| ((k - i) as f64).ln()).sum::<f64>() - ln_l_fact;
    let ln_exact = ln_k + ln_binom - ln_l_fact;
    let ln_simplified = ln_k + l as f64 * (2.0 + ln_k - 2.0 * (l as f64).ln());
    ShiftTailBound {
        ln_exact,
        ln_simplified,
    }
}
