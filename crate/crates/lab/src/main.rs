use std::path::{Path, PathBuf};
use std::process::ExitCode;

use be_lab::barriers::{self, DEFAULT_POINTS};
use be_lab::config::{Check, ExperimentConfig, ToleranceProfile};
use be_lab::suite::{self, SuiteOptions, DEFAULT_GRID};
use be_lab::{Format, LabError};
use be_spectral::testfn::BarrierFamily;
use clap::{Args, Parser, Subcommand};

/// Spectral gap experiments on warped products with densities.
#[derive(Debug, Parser)]
#[command(name = "be-lab", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Radial grid size; overrides the configuration.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Worker threads; overrides the configuration.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Overrides the configuration.
    #[arg(long, global = true, value_enum)]
    tolerance_profile: Option<ToleranceProfile>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First nonzero eigenvalue of each instance.
    Spectrum,
    /// Eigenvalue lower bounds and their margins.
    Certify,
    /// Gradient estimate and barrier dominance.
    Estimate,
    /// Soliton residuals and the identities they imply.
    SolitonCheck,
    /// Every check listed in the configuration.
    Sweep,
    /// The numbered reference criteria.
    VerifyPaper,
    /// Plot data (t, xi, eta, z) for a barrier.
    EmitBarriers(BarrierArgs),
}

#[derive(Debug, Args)]
struct BarrierArgs {
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.01)]
    b: f64,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// Standard barrier weight; ignored when --sigma is given.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Use the σ-barrier with this σ.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, LabError> {
    let g = &cli.global;
    match &cli.command {
        Command::Spectrum => configured(g, "spectrum", Some(&[Check::Spectrum])),
        Command::Certify => configured(g, "certify", Some(&[Check::Spectrum, Check::Bounds])),
        Command::Estimate => configured(g, "estimate", Some(&[Check::Spectrum, Check::Estimates])),
        Command::SolitonCheck => configured(g, "soliton-check", Some(&[Check::Soliton])),
        Command::Sweep => configured(g, "sweep", None),
        Command::VerifyPaper => verify(g),
        Command::EmitBarriers(args) => emit_barriers(g, args),
    }
}

fn write_output(g: &Global, stem: &str, text: &str) -> Result<PathBuf, LabError> {
    std::fs::create_dir_all(&g.out).map_err(|e| LabError::Io(format!("{}: {e}", g.out.display())))?;
    let path = g.out.join(format!("{stem}.{}", g.format.extension()));
    std::fs::write(&path, text).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn load(g: &Global) -> Result<ExperimentConfig, LabError> {
    let path: &Path = g.config.as_deref().ok_or_else(|| LabError::Config("--config is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(n) = g.grid {
        cfg.run.grid = n;
    }
    if let Some(k) = g.workers {
        cfg.run.workers = Some(k);
    }
    if let Some(p) = g.tolerance_profile {
        cfg.run.tolerance_profile = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configured(g: &Global, command: &str, checks: Option<&[Check]>) -> Result<i32, LabError> {
    let mut cfg = load(g)?;
    if let Some(checks) = checks {
        cfg.run.checks = checks.to_vec();
    }
    let report = be_lab::run::run(&cfg, command)?;
    let text = match g.format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json()?,
    };
    let path = write_output(g, command, &text)?;
    let s = report.summary;
    println!(
        "{command}: {} instances, {} passed, {} failed, {} errors -> {}",
        s.instances,
        s.passed,
        s.failed,
        s.errors,
        path.display()
    );
    for row in report.rows.iter().filter(|r| !r.message.is_empty()) {
        println!("  {} n={}: {}", row.family, row.n, row.message);
    }
    Ok(report.exit_code())
}

fn verify(g: &Global) -> Result<i32, LabError> {
    if g.config.is_some() {
        return Err(LabError::Config("verify-paper does not take --config".into()));
    }
    let opts = SuiteOptions {
        grid: g.grid.unwrap_or(DEFAULT_GRID),
        workers: g.workers,
        tolerance_profile: g.tolerance_profile.unwrap_or_default(),
    };
    if opts.workers == Some(0) {
        return Err(LabError::Config("--workers must be positive".into()));
    }
    let report = suite::verify(&opts)?;
    let text = match g.format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json()?,
    };
    let path = write_output(g, "verify-paper", &text)?;
    for (c, ok) in report.criteria() {
        println!("{} criterion {c}", if ok { "PASS" } else { "FAIL" });
    }
    for r in report.rows.iter().filter(|r| r.timing) {
        println!("  criterion {} {}: {:.2}", r.criterion, r.check, r.value.unwrap_or(f64::NAN));
    }
    println!("-> {}", path.display());
    Ok(if report.passed() { 0 } else { 1 })
}

fn emit_barriers(g: &Global, args: &BarrierArgs) -> Result<i32, LabError> {
    let (family, mu) = match args.sigma {
        Some(s) => (BarrierFamily::sigma(args.a, args.b, args.delta, s), None),
        None => (BarrierFamily::standard(args.a, args.b, args.delta, args.mu), Some(args.mu)),
    };
    let family = family.map_err(|e| LabError::Config(e.to_string()))?;
    let table = barriers::sample(&family, mu, args.sigma, args.points)?;
    let text = match g.format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()?,
    };
    let path = write_output(g, "barriers", &text)?;
    println!("{} points -> {}", table.points.len(), path.display());
    Ok(0)
}
