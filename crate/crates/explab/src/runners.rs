//! The experiment runners. Each one is a pure function of its
//! configuration: trial `t` uses the generator stream derived from
//! `(master_seed, t)`, trials are independent, and results are collected
//! in trial order, so outputs are identical however the trials are
//! scheduled.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use permscan::matrix::{estimate_entry_lower_bound, CoupledSample, ZeroOneMatrix};
use permscan::perm::all_permutations;
use permscan::quasirandom::{
    has_bounded_shifts, is_quasirandom_set, l_delta, random_l_bound, PartialMap,
};
use permscan::rng::derive_seed;
use permscan::scanning::multi_thread_scan;
use permscan::stats::{wilson_interval, Z_99};
use permscan::structure::{budget_ok, decode_structured, decompose, encode_structured};
use permscan::Permutation;

use crate::config::{ExperimentConfig, Kind};
use crate::output::ExperimentResult;

/// Stream index reserved for drawing the panel's random pattern, far above
/// any realistic trial count.
const PATTERN_STREAM: u64 = u64::MAX;

#[derive(Debug)]
pub enum ExplabError {
    /// Bad configuration; the CLI exits 1.
    Usage(String),
    /// An audited invariant failed; the CLI exits 2.
    Invariant(String),
    /// Unexpected internal failure; the CLI exits 1.
    Internal(String),
}

impl std::fmt::Display for ExplabError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExplabError::Usage(m) => write!(f, "usage error: {m}"),
            ExplabError::Invariant(m) => write!(f, "invariant violation: {m}"),
            ExplabError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for ExplabError {}

type RunResult = Result<ExperimentResult, ExplabError>;

/// Dispatch on the configured experiment kind.
pub fn run(config: &ExperimentConfig) -> RunResult {
    if config.exhaustive && !matches!(config.kind, Kind::Universality | Kind::Containment) {
        return Err(ExplabError::Usage(format!(
            "--exhaustive does not apply to {}; it enumerates the host permutations",
            config.kind.name()
        )));
    }
    if config.cap.is_some() && !matches!(config.kind, Kind::Scan) {
        return Err(ExplabError::Usage(format!(
            "--cap only applies to scan; the {} audit always reads real entries",
            config.kind.name()
        )));
    }
    match config.kind {
        Kind::Universality => run_universality(config),
        Kind::Containment => run_containment(config),
        Kind::Scan => run_scan_success(config),
        Kind::LDelta => run_ldelta_survey(config),
        Kind::Decompose => run_decomposition_sweep(config),
        Kind::Coupling => run_coupling_audit(config),
    }
}

fn require_n(config: &ExperimentConfig) -> Result<usize, ExplabError> {
    config
        .n
        .ok_or_else(|| ExplabError::Usage("--n (or a preset) is required here".into()))
}

fn require_trials(config: &ExperimentConfig) -> Result<u64, ExplabError> {
    if config.trials == 0 {
        return Err(ExplabError::Usage("--trials must be at least 1".into()));
    }
    Ok(config.trials)
}

/// The cap used by the capped scanning experiments: `ceil(ln^2 k)`.
pub fn log_squared_cap(k: usize) -> usize {
    let l = (k as f64).ln();
    ((l * l).ceil() as usize).max(1)
}

/// Estimate the probability that a random length-`n` permutation contains
/// every pattern of length `k`.
pub fn run_universality(config: &ExperimentConfig) -> RunResult {
    let k = config.k;
    let n = require_n(config)?;
    if n < k {
        return Err(ExplabError::Usage(format!(
            "n = {n} is shorter than k = {k}"
        )));
    }
    let columns = vec!["trial", "seed", "universal", "missing_count"];
    let check = |sigma: &Permutation| -> Result<(bool, usize), ExplabError> {
        let report = sigma
            .is_k_universal(k)
            .map_err(|e| ExplabError::Usage(e.to_string()))?;
        Ok((report.universal, report.missing.len()))
    };

    let mut rows = Vec::new();
    let mut universal_count = 0u64;
    let mut summary = Map::new();
    if config.exhaustive {
        if n > 7 {
            return Err(ExplabError::Usage(format!(
                "exhaustive mode enumerates S_n; n = {n} is too large (max 7)"
            )));
        }
        for (i, sigma) in all_permutations(n).enumerate() {
            let (universal, missing) = check(&sigma)?;
            universal_count += u64::from(universal);
            rows.push(vec![json!(i), json!(0), json!(universal), json!(missing)]);
        }
        let total = rows.len() as u64;
        summary.insert("exact".into(), json!(true));
        summary.insert("total".into(), json!(total));
        summary.insert("universal_count".into(), json!(universal_count));
        summary.insert(
            "frequency".into(),
            json!(universal_count as f64 / total as f64),
        );
    } else {
        let trials = require_trials(config)?;
        let computed: Vec<(u64, bool, usize)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let seed = derive_seed(config.master_seed, t);
                let sigma = Permutation::random(n, seed);
                let report = sigma
                    .is_k_universal(k)
                    .map_err(|e| ExplabError::Usage(e.to_string()))?;
                Ok((seed, report.universal, report.missing.len()))
            })
            .collect::<Result<_, ExplabError>>()?;
        for (t, (seed, universal, missing)) in computed.into_iter().enumerate() {
            universal_count += u64::from(universal);
            rows.push(vec![
                json!(t),
                json!(seed),
                json!(universal),
                json!(missing),
            ]);
        }
        let w = wilson_interval(universal_count, trials, Z_99);
        summary.insert("exact".into(), json!(false));
        summary.insert("total".into(), json!(trials));
        summary.insert("universal_count".into(), json!(universal_count));
        summary.insert("frequency".into(), json!(w.estimate));
        summary.insert("wilson_low".into(), json!(w.low));
        summary.insert("wilson_high".into(), json!(w.high));
    }
    Ok(ExperimentResult {
        config: config.clone(),
        columns,
        rows,
        summary,
    })
}

/// The panel of patterns compared at equal `(k, n)`.
fn pattern_panel(config: &ExperimentConfig, with_reversal: bool) -> Vec<(String, Permutation)> {
    let k = config.k;
    if let Some(p) = &config.pattern {
        return vec![("given".to_string(), p.clone())];
    }
    let mut panel = vec![("identity".to_string(), Permutation::identity(k))];
    if with_reversal {
        panel.push(("reversal".to_string(), Permutation::decreasing(k)));
    }
    let ell = (k as f64).sqrt().round() as usize;
    if ell * ell == k && ell >= 1 {
        panel.push(("tilted_grid".to_string(), Permutation::tilted_grid(ell)));
    }
    panel.push((
        "uniform".to_string(),
        Permutation::random(k, derive_seed(config.master_seed, PATTERN_STREAM)),
    ));
    panel
}

/// Estimate avoidance probabilities `Pr(pattern not contained)` for a panel
/// of patterns against the same random hosts.
pub fn run_containment(config: &ExperimentConfig) -> RunResult {
    let k = config.k;
    let n = require_n(config)?;
    if n < k {
        return Err(ExplabError::Usage(format!(
            "n = {n} is shorter than k = {k}"
        )));
    }
    if let Some(p) = &config.pattern {
        if p.len() != k {
            return Err(ExplabError::Usage(format!(
                "--pattern has length {}, expected k = {k}",
                p.len()
            )));
        }
    }
    let panel = pattern_panel(config, false);
    let columns = vec!["trial", "seed", "pattern_name", "pattern", "contained"];

    let hosts: Vec<(Value, u64, Permutation)> = if config.exhaustive {
        if n > 7 {
            return Err(ExplabError::Usage(format!(
                "exhaustive mode enumerates S_n; n = {n} is too large (max 7)"
            )));
        }
        all_permutations(n)
            .enumerate()
            .map(|(i, s)| (json!(i), 0, s))
            .collect()
    } else {
        let trials = require_trials(config)?;
        (0..trials)
            .map(|t| {
                let seed = derive_seed(config.master_seed, t);
                (json!(t), seed, Permutation::random(n, seed))
            })
            .collect()
    };

    let per_host: Vec<Vec<bool>> = hosts
        .par_iter()
        .map(|(_, _, sigma)| {
            panel
                .iter()
                .map(|(_, pi)| {
                    sigma
                        .contains_pattern(pi)
                        .map(|w| w.is_some())
                        .map_err(|e| ExplabError::Internal(e.to_string()))
                })
                .collect::<Result<Vec<bool>, ExplabError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    let mut contained_counts = vec![0u64; panel.len()];
    for ((trial, seed, _), outcomes) in hosts.iter().zip(&per_host) {
        for (i, ((name, pi), &contained)) in panel.iter().zip(outcomes).enumerate() {
            contained_counts[i] += u64::from(contained);
            rows.push(vec![
                trial.clone(),
                json!(seed),
                json!(name),
                json!(pi.to_string()),
                json!(contained),
            ]);
        }
    }
    let total = hosts.len() as u64;
    let mut summary = Map::new();
    summary.insert("exact".into(), json!(config.exhaustive));
    summary.insert("total".into(), json!(total));
    let mut per_pattern = Map::new();
    for ((name, _), &contained) in panel.iter().zip(&contained_counts) {
        let avoided = total - contained;
        let w = wilson_interval(avoided, total, Z_99);
        per_pattern.insert(
            name.clone(),
            json!({
                "contained": contained,
                "avoidance_frequency": w.estimate,
                "avoidance_wilson_low": w.low,
                "avoidance_wilson_high": w.high,
            }),
        );
    }
    summary.insert("patterns".into(), Value::Object(per_pattern));
    Ok(ExperimentResult {
        config: config.clone(),
        columns,
        rows,
        summary,
    })
}

/// Success frequencies of multi-thread scanning over random matrices, with
/// the thread-overlap bound audited whenever it applies.
pub fn run_scan_success(config: &ExperimentConfig) -> RunResult {
    let k = config.k;
    let m = config
        .m
        .ok_or_else(|| ExplabError::Usage("--m (matrix columns) is required here".into()))?;
    let trials = require_trials(config)?;
    if config.threads < 1 || config.threads > k {
        return Err(ExplabError::Usage(format!(
            "--threads must lie in 1..={k} (offsets t with t + k <= 2k)"
        )));
    }
    let pattern = config
        .pattern
        .clone()
        .unwrap_or_else(|| Permutation::identity(k));
    if pattern.len() != k {
        return Err(ExplabError::Usage(format!(
            "--pattern has length {}, expected k = {k}",
            pattern.len()
        )));
    }
    let offsets: Vec<usize> = (1..=config.threads).collect();
    // The overlap bound 3 sqrt(k) ln^2 k applies to low-shift patterns
    // scanned with the ln^2 k cap.
    let audit_overlaps = config.cap == Some(log_squared_cap(k)) && has_bounded_shifts(&pattern);
    let overlap_bound = 3.0 * (k as f64).sqrt() * (k as f64).ln().powi(2);

    struct Trial {
        seed: u64,
        any_success: bool,
        success_count: usize,
        pretended: usize,
        max_overlap: usize,
        per_thread: Vec<bool>,
    }

    let computed: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(config.master_seed, t);
            let matrix = ZeroOneMatrix::random(2 * k, m, seed);
            let report = multi_thread_scan(&matrix, &pattern, &offsets, config.cap)
                .map_err(|e| ExplabError::Usage(e.to_string()))?;
            let max_overlap = report.overlaps.iter().map(|o| o.size).max().unwrap_or(0);
            if audit_overlaps && max_overlap as f64 > overlap_bound {
                return Err(ExplabError::Invariant(format!(
                    "trial {t}: thread overlap {max_overlap} exceeds {overlap_bound}"
                )));
            }
            Ok(Trial {
                seed,
                any_success: report.any_success,
                success_count: report.traces.iter().filter(|tr| tr.success).count(),
                pretended: report.traces.iter().map(|tr| tr.pretended).sum(),
                max_overlap,
                per_thread: report.traces.iter().map(|tr| tr.success).collect(),
            })
        })
        .collect::<Result<_, _>>()?;

    let columns = vec![
        "trial",
        "seed",
        "any_success",
        "success_count",
        "pretended_total",
        "max_overlap",
    ];
    let mut rows = Vec::new();
    let mut any_count = 0u64;
    let mut thread_counts = vec![0u64; offsets.len()];
    let mut overlap_sum = 0usize;
    for (t, trial) in computed.iter().enumerate() {
        any_count += u64::from(trial.any_success);
        for (i, &s) in trial.per_thread.iter().enumerate() {
            thread_counts[i] += u64::from(s);
        }
        overlap_sum += trial.max_overlap;
        rows.push(vec![
            json!(t),
            json!(trial.seed),
            json!(trial.any_success),
            json!(trial.success_count),
            json!(trial.pretended),
            json!(trial.max_overlap),
        ]);
    }
    let w = wilson_interval(trials - any_count, trials, Z_99);
    let mut summary = Map::new();
    summary.insert("pattern".into(), json!(pattern.to_string()));
    summary.insert("any_success_count".into(), json!(any_count));
    summary.insert("failure_frequency".into(), json!(w.estimate));
    summary.insert("failure_wilson_low".into(), json!(w.low));
    summary.insert("failure_wilson_high".into(), json!(w.high));
    summary.insert("thread_success_counts".into(), json!(thread_counts));
    summary.insert(
        "mean_max_overlap".into(),
        json!(overlap_sum as f64 / trials as f64),
    );
    summary.insert("overlap_bound_checked".into(), json!(audit_overlaps));
    if audit_overlaps {
        summary.insert("overlap_bound".into(), json!(overlap_bound));
    }
    Ok(ExperimentResult {
        config: config.clone(),
        columns,
        rows,
        summary,
    })
}

/// Distribution of the maximal shift length over uniform permutations, and
/// the fraction staying under `3 sqrt(k)`, checked one-sidedly against the
/// exact union bound.
pub fn run_ldelta_survey(config: &ExperimentConfig) -> RunResult {
    let k = config.k;
    let trials = require_trials(config)?;
    if k < 1 {
        return Err(ExplabError::Usage("k must be at least 1".into()));
    }

    let per_trial: Vec<(u64, Vec<usize>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(config.master_seed, t);
            let pi = Permutation::random(k, seed);
            let phi = PartialMap::from_permutation(&pi);
            let ls: Vec<usize> = (1..=k)
                .map(|d| l_delta(&phi, d).expect("delta in range"))
                .collect();
            (seed, ls)
        })
        .collect();

    let columns = vec!["trial", "seed", "k", "delta", "l_delta", "max_l_delta"];
    let mut rows = Vec::new();
    let mut maxima = Vec::with_capacity(trials as usize);
    let mut bounded_count = 0u64;
    for (t, (seed, ls)) in per_trial.iter().enumerate() {
        let max_l = ls.iter().copied().max().unwrap_or(0);
        maxima.push(max_l);
        if max_l * max_l <= 9 * k {
            bounded_count += 1;
        }
        for (d, &l) in ls.iter().enumerate() {
            rows.push(vec![
                json!(t),
                json!(seed),
                json!(k),
                json!(d + 1),
                json!(l),
                json!(max_l),
            ]);
        }
    }

    // One-sided dominance: wherever the exact union bound is below 1, the
    // empirical tail may not exceed it by more than 3 sigma.
    let mut violations = Vec::new();
    for l in 1..=k {
        let bound = random_l_bound(k, l).exact();
        if bound >= 1.0 {
            continue;
        }
        let hits = maxima.iter().filter(|&&m| m >= l).count() as f64;
        let empirical = hits / trials as f64;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        if empirical > bound + 3.0 * sigma {
            violations.push(json!({ "L": l, "empirical": empirical, "bound": bound }));
        }
    }

    let w = wilson_interval(bounded_count, trials, Z_99);
    let mut summary = Map::new();
    summary.insert("bounded_count".into(), json!(bounded_count));
    summary.insert("bounded_fraction".into(), json!(w.estimate));
    summary.insert("bounded_wilson_low".into(), json!(w.low));
    summary.insert("bounded_wilson_high".into(), json!(w.high));
    summary.insert(
        "max_observed".into(),
        json!(maxima.iter().copied().max().unwrap_or(0)),
    );
    summary.insert("dominance_violations".into(), json!(violations));
    Ok(ExperimentResult {
        config: config.clone(),
        columns,
        rows,
        summary,
    })
}

/// Decompose named fixtures and uniform samples, asserting every
/// postcondition and round-tripping each structured part through its
/// encoding.
pub fn run_decomposition_sweep(config: &ExperimentConfig) -> RunResult {
    let k = config.k;
    let trials = require_trials(config)?;
    let alpha = config.alpha;
    let max_iter = (2 * alpha.den()).div_ceil(alpha.num().max(1)) as usize;

    let mut inputs: Vec<(String, Value, u64, Permutation)> = vec![(
        "identity".to_string(),
        json!("identity"),
        0,
        Permutation::identity(k),
    )];
    let ell = (k as f64).sqrt().round() as usize;
    if ell * ell == k {
        inputs.push((
            "tilted_grid".to_string(),
            json!("tilted_grid"),
            0,
            Permutation::tilted_grid(ell),
        ));
    }
    for t in 0..trials {
        let seed = derive_seed(config.master_seed, t);
        inputs.push((
            "uniform".to_string(),
            json!(t),
            seed,
            Permutation::random(k, seed),
        ));
    }

    struct Outcome {
        z_size: usize,
        iterations: usize,
        q_final: usize,
        b_final: usize,
        budget: Option<permscan::structure::BudgetCheck>,
        encoding_bits: u64,
    }

    let outcomes: Vec<Outcome> = inputs
        .par_iter()
        .map(|(source, _, _, pi)| {
            let d = decompose(pi, alpha, config.q, max_iter)
                .map_err(|e| ExplabError::Invariant(format!("{source}: {e}")))?;
            let encoding_bits = if d.z_set.is_empty() {
                0
            } else {
                let phi = PartialMap::restriction(pi, &d.z_set);
                let enc = encode_structured(&phi, &d.system)
                    .map_err(|e| ExplabError::Invariant(format!("{source}: encode: {e}")))?;
                let back = decode_structured(&enc)
                    .map_err(|e| ExplabError::Invariant(format!("{source}: decode: {e}")))?;
                if back != phi {
                    return Err(ExplabError::Invariant(format!(
                        "{source}: encoding round trip changed the map"
                    )));
                }
                enc.bit_size()
            };
            let budget = if d.q_final >= 1 && d.b_final >= 1 {
                budget_ok(d.q_final, d.b_final, k).ok()
            } else {
                None
            };
            Ok(Outcome {
                z_size: d.z_set.len(),
                iterations: d.trace.len(),
                q_final: d.q_final,
                b_final: d.b_final,
                budget,
                encoding_bits,
            })
        })
        .collect::<Result<_, _>>()?;

    let columns = vec![
        "source",
        "trial",
        "seed",
        "z_size",
        "iterations",
        "q_final",
        "b_final",
        "budget_lhs",
        "budget_rhs",
        "budget_ok",
        "encoding_bits",
    ];
    let mut rows = Vec::new();
    let mut z_sizes = Vec::new();
    let mut z_empty = 0u64;
    for ((source, trial, seed, _), o) in inputs.iter().zip(&outcomes) {
        if source == "uniform" {
            z_sizes.push(o.z_size);
            z_empty += u64::from(o.z_size == 0);
        }
        let (lhs, rhs, ok) = match &o.budget {
            Some(b) => (json!(b.lhs), json!(b.rhs), json!(b.ok)),
            None => (Value::Null, Value::Null, Value::Null),
        };
        rows.push(vec![
            json!(source),
            trial.clone(),
            json!(seed),
            json!(o.z_size),
            json!(o.iterations),
            json!(o.q_final),
            json!(o.b_final),
            lhs,
            rhs,
            ok,
            json!(o.encoding_bits),
        ]);
    }
    z_sizes.sort_unstable();
    let mut summary = Map::new();
    summary.insert("uniform_trials".into(), json!(trials));
    summary.insert("z_empty_count".into(), json!(z_empty));
    if !z_sizes.is_empty() {
        summary.insert("z_size_min".into(), json!(z_sizes[0]));
        summary.insert("z_size_median".into(), json!(z_sizes[z_sizes.len() / 2]));
        summary.insert("z_size_max".into(), json!(z_sizes[z_sizes.len() - 1]));
    }
    summary.insert("all_postconditions_verified".into(), json!(true));
    Ok(ExperimentResult {
        config: config.clone(),
        columns,
        rows,
        summary,
    })
}

/// Audit the containment chain on coupled samples: scan success implies
/// matrix containment implies pattern containment. Any break is a hard
/// failure; per-entry one-frequencies are reported alongside.
pub fn run_coupling_audit(config: &ExperimentConfig) -> RunResult {
    let k = config.k;
    let n = require_n(config)?;
    let trials = require_trials(config)?;
    if k < 1 || n == 0 || n % (4 * k) != 0 {
        return Err(ExplabError::Usage(format!(
            "n = {n} must be positive and divisible by 4k = {}",
            4 * k
        )));
    }
    let threads = config.threads.clamp(1, k);
    let offsets: Vec<usize> = (1..=threads).collect();
    let panel = pattern_panel(config, true);

    struct Trial {
        seed: u64,
        // per pattern: (scan, matrix, sigma)
        chain: Vec<(bool, bool, bool)>,
    }

    let computed: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(config.master_seed, t);
            let sample =
                CoupledSample::build(k, n, seed).map_err(|e| ExplabError::Usage(e.to_string()))?;
            if !sample.verify_minor_witness() {
                return Err(ExplabError::Invariant(format!(
                    "trial {t}: coupled matrix is not an interval minor of the permutation matrix"
                )));
            }
            let mut chain = Vec::with_capacity(panel.len());
            for (name, pi) in &panel {
                // The chain is only sound for real ones: never cap here.
                let report = multi_thread_scan(&sample.mu, pi, &offsets, None)
                    .map_err(|e| ExplabError::Internal(e.to_string()))?;
                for trace in &report.traces {
                    if let Some(w) = &trace.witness {
                        if !w.iter().all(|&(y, x)| sample.mu.get(y, x)) {
                            return Err(ExplabError::Invariant(format!(
                                "trial {t}: scan witness for {name} reads a zero"
                            )));
                        }
                    }
                }
                let matrix_witness = sample.mu.contains_permutation(pi);
                if let Some(w) = &matrix_witness {
                    if !w.iter().all(|&(y, x)| sample.mu.get(y, x)) {
                        return Err(ExplabError::Invariant(format!(
                            "trial {t}: matrix witness for {name} reads a zero"
                        )));
                    }
                }
                let sigma_witness = sample
                    .sigma
                    .contains_pattern(pi)
                    .map_err(|e| ExplabError::Internal(e.to_string()))?;
                if let Some(w) = &sigma_witness {
                    if !w.verify(&sample.sigma, pi) {
                        return Err(ExplabError::Invariant(format!(
                            "trial {t}: containment witness for {name} fails to re-verify"
                        )));
                    }
                }
                let scan = report.any_success;
                let matrix = matrix_witness.is_some();
                let sigma = sigma_witness.is_some();
                if scan && !matrix {
                    return Err(ExplabError::Invariant(format!(
                        "trial {t}: scan found {name} but matrix containment disagrees"
                    )));
                }
                if matrix && !sigma {
                    return Err(ExplabError::Invariant(format!(
                        "trial {t}: matrix contains {name} but the permutation does not"
                    )));
                }
                chain.push((scan, matrix, sigma));
            }
            Ok(Trial { seed, chain })
        })
        .collect::<Result<_, _>>()?;

    let columns = vec![
        "trial",
        "seed",
        "pattern_name",
        "scan_success",
        "matrix_contains",
        "sigma_contains",
        "chain_ok",
    ];
    let mut rows = Vec::new();
    let mut scan_counts = vec![0u64; panel.len()];
    for (t, trial) in computed.iter().enumerate() {
        for (i, ((name, _), &(scan, matrix, sigma))) in panel.iter().zip(&trial.chain).enumerate() {
            scan_counts[i] += u64::from(scan);
            rows.push(vec![
                json!(t),
                json!(trial.seed),
                json!(name),
                json!(scan),
                json!(matrix),
                json!(sigma),
                json!((!scan || matrix) && (!matrix || sigma)),
            ]);
        }
    }

    let table = estimate_entry_lower_bound(k, n, trials, config.master_seed)
        .map_err(|e| ExplabError::Internal(e.to_string()))?;
    let mut summary = Map::new();
    summary.insert("chain_violations".into(), json!(0));
    summary.insert("minor_witness_failures".into(), json!(0));
    summary.insert("entry_freq_min".into(), json!(table.min_estimate()));
    summary.insert("entry_upper_min".into(), json!(table.min_upper_edge()));
    let mut per_pattern = Map::new();
    for ((name, _), &count) in panel.iter().zip(&scan_counts) {
        let w = wilson_interval(count, trials, Z_99);
        per_pattern.insert(
            name.clone(),
            json!({ "scan_success_frequency": w.estimate, "wilson_low": w.low, "wilson_high": w.high }),
        );
    }
    summary.insert("patterns".into(), Value::Object(per_pattern));
    Ok(ExperimentResult {
        config: config.clone(),
        columns,
        rows,
        summary,
    })
}

/// True when the quasirandomness stop condition already holds for the whole
/// index set; used by callers sanity-checking decompose outputs.
pub fn whole_set_quasirandom(pi: &Permutation, config: &ExperimentConfig) -> bool {
    let all: Vec<usize> = (1..=pi.len()).collect();
    is_quasirandom_set(pi, &all, config.alpha.doubled(), config.q).0
}
