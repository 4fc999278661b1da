//! Experiment configuration and the length presets.

use permscan::quasirandom::Ratio;
use permscan::Permutation;
use serde::Serialize;

/// Output schema tag embedded in every result file.
pub const SCHEMA: &str = "explab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Universality,
    Containment,
    Scan,
    #[serde(rename = "ldelta")]
    LDelta,
    Decompose,
    Coupling,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Universality => "universality",
            Kind::Containment => "containment",
            Kind::Scan => "scan",
            Kind::LDelta => "ldelta",
            Kind::Decompose => "decompose",
            Kind::Coupling => "coupling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Host-length presets named after their growth laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthPreset {
    /// `(1 + epsilon) k^2 / 4`, just above the length forced by LIS growth.
    K2Over4,
    /// `20 k^2`, comfortable for patterns without long shifts.
    Dense20K2,
    /// `2000 k^2 ln ln k`, comfortable for every pattern.
    LogLog2000K2,
}

impl LengthPreset {
    pub fn length(&self, k: usize, epsilon: f64) -> usize {
        let k2 = (k * k) as f64;
        let n = match self {
            LengthPreset::K2Over4 => (1.0 + epsilon) * k2 / 4.0,
            LengthPreset::Dense20K2 => 20.0 * k2,
            LengthPreset::LogLog2000K2 => 2000.0 * k2 * (k as f64).ln().ln().max(0.0),
        };
        (n.ceil() as usize).max(k)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    pub alpha: Ratio,
    pub q: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Permutation>,
    pub exhaustive: bool,
    #[serde(skip)]
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(kind: Kind, k: usize) -> Self {
        ExperimentConfig {
            kind,
            k,
            n: None,
            m: None,
            trials: 1000,
            master_seed: 0,
            threads: 1,
            cap: None,
            alpha: Ratio::new(1, 10),
            q: 5,
            pattern: None,
            exhaustive: false,
            format: OutputFormat::Csv,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_alpha(mut self, alpha: Ratio) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = q;
        self
    }

    pub fn with_pattern(mut self, pattern: Permutation) -> Self {
        self.pattern = Some(pattern);
        self
    }

    pub fn exhaustive(mut self, on: bool) -> Self {
        self.exhaustive = on;
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }
}
