//! Command-line front end for the experiment runners.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when an audited
//! invariant fails during a run.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use explab::config::{ExperimentConfig, Kind, LengthPreset, OutputFormat};
use explab::runners::{run, ExplabError};
use permscan::quasirandom::Ratio;
use permscan::Permutation;

#[derive(Parser)]
#[command(
    name = "explab",
    about = "Seeded Monte Carlo experiments on permutation pattern containment",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate how often a random permutation contains every length-k pattern
    Universality(CommonArgs),
    /// Estimate avoidance probabilities for a pattern panel
    Containment(CommonArgs),
    /// Multi-thread scan success rates over random matrices
    Scan(CommonArgs),
    /// Survey maximal shift lengths of uniform permutations
    Ldelta(CommonArgs),
    /// Structure-vs-randomness decomposition sweep
    Decompose(CommonArgs),
    /// Audit the coupled-sample containment chain
    Coupling(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    /// (1 + epsilon) k^2 / 4
    K2over4,
    /// 20 k^2
    #[value(name = "20k2")]
    Dense20k2,
    /// 2000 k^2 ln ln k
    #[value(name = "2000k2loglog")]
    LogLog2000k2,
}

#[derive(Args)]
struct CommonArgs {
    /// Pattern length k
    #[arg(long)]
    k: usize,
    /// Host permutation length n
    #[arg(long)]
    n: Option<usize>,
    /// Matrix column count m (scan)
    #[arg(long)]
    m: Option<usize>,
    /// Derive n from a named length preset when --n is absent
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Epsilon for the k2over4 preset
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Number of Monte Carlo trials
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Master seed; trial t uses the stream derived from (seed, t)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of scan threads (offsets 1..=threads)
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Pretend-one cap for scanning
    #[arg(long)]
    cap: Option<usize>,
    /// Quasirandomness threshold alpha (rational, e.g. 0.1 or 1/4)
    #[arg(long, default_value = "1/10")]
    alpha: String,
    /// Quasirandomness delta-count threshold q
    #[arg(long, default_value_t = 5)]
    q: usize,
    /// Pattern in one-line notation, e.g. "2,4,1,3"
    #[arg(long)]
    pattern: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Enumerate all of S_n exactly instead of sampling (n <= 7)
    #[arg(long, default_value_t = false)]
    exhaustive: bool,
}

fn build_config(kind: Kind, args: &CommonArgs) -> Result<ExperimentConfig, String> {
    let alpha: Ratio = args.alpha.parse().map_err(|e| format!("--alpha: {e}"))?;
    let mut config = ExperimentConfig::new(kind, args.k)
        .with_trials(args.trials)
        .with_seed(args.seed)
        .with_threads(args.threads)
        .with_cap(args.cap)
        .with_alpha(alpha)
        .with_q(args.q)
        .exhaustive(args.exhaustive)
        .with_format(match args.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        });
    let preset_n = args.preset.map(|p| {
        let preset = match p {
            PresetArg::K2over4 => LengthPreset::K2Over4,
            PresetArg::Dense20k2 => LengthPreset::Dense20K2,
            PresetArg::LogLog2000k2 => LengthPreset::LogLog2000K2,
        };
        preset.length(args.k, args.epsilon)
    });
    if let Some(n) = args.n.or(preset_n) {
        config = config.with_n(n);
    }
    if let Some(m) = args.m {
        config = config.with_m(m);
    }
    if let Some(p) = &args.pattern {
        let pattern: Permutation = p.parse().map_err(|e| format!("--pattern: {e}"))?;
        config = config.with_pattern(pattern);
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let (kind, args) = match &cli.command {
        Command::Universality(a) => (Kind::Universality, a),
        Command::Containment(a) => (Kind::Containment, a),
        Command::Scan(a) => (Kind::Scan, a),
        Command::Ldelta(a) => (Kind::LDelta, a),
        Command::Decompose(a) => (Kind::Decompose, a),
        Command::Coupling(a) => (Kind::Coupling, a),
    };
    let config = match build_config(kind, args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let started = Instant::now();
    let result = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                ExplabError::Invariant(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            };
        }
    };
    let rendered = result.render();
    let status = match &args.out {
        Some(path) => std::fs::write(path, rendered.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| format!("cannot write stdout: {e}")),
    };
    if let Err(msg) = status {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    eprintln!(
        "{} finished: {} rows in {:.3}s",
        config.kind.name(),
        result.rows.len(),
        started.elapsed().as_secs_f64()
    );
    ExitCode::SUCCESS
}
