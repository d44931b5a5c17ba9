use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use compound_capacity::cli::{execute, Command, FmTarget};
use compound_capacity::config::{ConfigError, RunConfig};
use compound_capacity::fm::Thm2Variant;

#[derive(Parser)]
#[command(
    name = "ccap",
    version,
    about = "Capacity bounds for compound channels with state known at the encoder"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the CSV artifact here instead of stdout; the report then goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the per-restart optimizer trace (search commands only).
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Worker threads for restarts and sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Check the documented invariants on the results; exit 3 on violation.
    #[arg(long, global = true)]
    self_check: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    grid_resolution: Option<f64>,
    /// Input power P.
    #[arg(long, global = true, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Noise power N.
    #[arg(long, global = true, allow_negative_numbers = true)]
    n: Option<f64>,
    /// Interference power Q.
    #[arg(long, global = true, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Comma-separated interference coefficients.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    thetas: Option<Vec<f64>>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    inr_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    inr_max: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lower and upper bounds of the Gaussian model over a log-spaced INR grid.
    GdpSweep,
    /// Every Gaussian quantity at one parameter point.
    GdpPoint,
    /// Evaluate the discrete bounds for the configured law or chain.
    DiscreteEval,
    /// Maximize a discrete bound over coding laws.
    DiscreteMaximize,
    /// Re-derive a rate region by exact Fourier-Motzkin elimination.
    FmVerify {
        #[arg(long, value_enum, default_value = "full")]
        variant: Variant,
        /// Verify the general system with this many receivers instead.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Decide whether w2 is a degraded version of w1.
    DegradedTest,
    /// Feedback bound next to the optimized no-feedback bound.
    Feedback,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Full,
    WithoutMartonSum,
    Collapsed,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn check_flag(flag: &str, ok: bool, msg: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::invalid(flag, msg))
    }
}

fn apply_overrides(cli: &Cli, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    if let Some(s) = cli.seed {
        cfg.seed = s;
        cfg.search.seed = s;
    }
    if let Some(r) = cli.restarts {
        check_flag("--restarts", r >= 1, "must be at least 1")?;
        cfg.search.restarts = r;
    }
    if let Some(m) = cli.max_iters {
        check_flag("--max-iters", m >= 1, "must be at least 1")?;
        cfg.search.max_iters = m;
    }
    if let Some(g) = cli.grid_resolution {
        check_flag(
            "--grid-resolution",
            g > 0.0 && g <= 0.5,
            "must lie in (0, 0.5]",
        )?;
        cfg.search.grid_resolution = g;
    }
    if let Some(p) = cli.p {
        check_flag("--p", p > 0.0 && p.is_finite(), "must be positive")?;
        cfg.gdp.p = p;
    }
    if let Some(n) = cli.n {
        check_flag("--n", n > 0.0 && n.is_finite(), "must be positive")?;
        cfg.gdp.n = n;
    }
    if let Some(q) = cli.q {
        check_flag("--q", q >= 0.0 && q.is_finite(), "must be nonnegative")?;
        cfg.gdp.q = q;
    }
    if let Some(t) = &cli.thetas {
        check_flag("--thetas", !t.is_empty(), "needs at least one coefficient")?;
        cfg.gdp.thetas = t.clone();
    }
    if let Some(x) = cli.inr_min {
        cfg.sweep.inr_min = x;
    }
    if let Some(x) = cli.inr_max {
        cfg.sweep.inr_max = x;
    }
    if let Some(x) = cli.points {
        cfg.sweep.points = x;
    }
    cfg.sweep
        .validate()
        .map_err(|e| ConfigError::invalid("sweep", e.to_string()))?;
    if let Some(j) = cli.jobs {
        check_flag("--jobs", j >= 1, "must be at least 1")?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match RunConfig::from_path(path) {
            Ok(c) => c,
            Err(e @ ConfigError::Io { .. }) => return fail(1, e),
            Err(e) => return fail(2, e),
        },
        None => RunConfig::default(),
    };
    if let Err(e) = apply_overrides(&cli, &mut cfg) {
        return fail(2, e);
    }
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            return fail(1, e);
        }
    }

    let command = match &cli.command {
        Cmd::GdpSweep => Command::GdpSweep,
        Cmd::GdpPoint => Command::GdpPoint,
        Cmd::DiscreteEval => Command::DiscreteEval,
        Cmd::DiscreteMaximize => Command::DiscreteMaximize,
        Cmd::DegradedTest => Command::DegradedTest,
        Cmd::Feedback => Command::Feedback,
        Cmd::FmVerify { variant, k } => Command::FmVerify(match (k, variant) {
            (Some(k), _) => FmTarget::K(*k),
            (None, Variant::Full) => FmTarget::Thm2(Thm2Variant::Full),
            (None, Variant::WithoutMartonSum) => FmTarget::Thm2(Thm2Variant::WithoutMartonSum),
            (None, Variant::Collapsed) => FmTarget::Thm2(Thm2Variant::CollapsedAuxiliaries),
        }),
    };

    let out = match execute(command, &cfg, cli.self_check) {
        Ok(o) => o,
        Err(e) if e.is_validation() => return fail(2, e),
        Err(e) => return fail(1, e),
    };

    let csv = out.csv.unwrap_or_default();
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_file(path, &csv) {
                return fail(1, e);
            }
            print!("{}", out.report);
        }
        None => {
            eprint!("{}", out.report);
            print!("{csv}");
        }
    }
    if let (Some(path), Some(trace)) = (&cli.trace, &out.trace_csv) {
        if let Err(e) = write_file(path, trace) {
            return fail(1, e);
        }
    }
    if !out.violations.is_empty() {
        for v in &out.violations {
            eprintln!("self-check: {v}");
        }
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
