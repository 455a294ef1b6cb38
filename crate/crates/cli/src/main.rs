//! `ptcycle`: thermodynamics, cycles, contours and phase structure of the
//! PT-symmetric oscillator-bath model.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 verification mismatch. Errors are printed as one `error_code: detail`
//! line on stderr.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CycleKindArg, Format, PlaneArg, RunConfig, Vary};
use ptcycle_core::{Error, TimeDependence};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{}{}", .err, .context.as_ref().map(|c| format!(" ({c})")).unwrap_or_default())]
    Core { err: Error, context: Option<String> },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Verify(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Core { err, context: None }
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config_error",
            CliError::Core { err, .. } => err.code(),
            CliError::Io(_) => "io_error",
            CliError::Verify(_) => "verification_failed",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core { err: Error::InvalidParameter(_) | Error::InvalidRatio(_) | Error::NonNormalizable { .. }, .. } => 2,
            CliError::Core { .. } | CliError::Io(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(name = "ptcycle", version, about = "Thermodynamic cycles of a PT-symmetric oscillator bath")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Significant digits, 6 to 17.
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ModelArgs {
    /// Bath size.
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
}

#[derive(Args, Default)]
struct SweepArgs {
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args, Default)]
struct TimeArgs {
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Z, F, U, S and p on a temperature grid.
    Thermo {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Build a four-stroke cycle; --tmin/--tmax set the cold/hot isotherms.
    Cycle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        kind: Option<CycleKindArg>,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Constant-entropy contour; T runs over [--tmin, --tmax].
    Contour {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[arg(long, value_enum)]
        plane: Option<PlaneArg>,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<f64>,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
    /// Pressure zeros, binodal and spinodal of one isotherm.
    Phase {
        #[command(flatten)]
        model: ModelArgs,
        /// Isotherm temperature.
        #[arg(long = "T")]
        temperature: Option<f64>,
        #[arg(long)]
        branch: Option<u32>,
    },
    /// Trace an isentrope over [--tmin, --tmax].
    Isentrope {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<f64>,
        #[arg(long, value_enum)]
        vary: Option<Vary>,
    },
    /// Check the library against the published reference values.
    Verify,
}

fn apply_model(cfg: &mut RunConfig, m: &ModelArgs) {
    if let Some(n) = m.n {
        cfg.model.n = n;
    }
    if let Some(nu) = m.nu {
        cfg.model.nu = nu;
    }
    if let Some(l) = m.lambda {
        cfg.model.lambda = l;
    }
}

fn apply_sweep(cfg: &mut RunConfig, s: &SweepArgs) {
    if let Some(t) = s.tmin {
        cfg.sweep.tmin = t;
    }
    if let Some(t) = s.tmax {
        cfg.sweep.tmax = t;
    }
    if let Some(n) = s.steps {
        cfg.sweep.steps = n;
    }
}

fn configure(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(p) = cli.precision {
        cfg.output.precision = p;
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    match &cli.command {
        Command::Thermo { model, sweep } => {
            apply_model(&mut cfg, model);
            apply_sweep(&mut cfg, sweep);
        }
        Command::Cycle { model, kind, tmin, tmax } => {
            apply_model(&mut cfg, model);
            cfg.cycle.kind = kind.unwrap_or(cfg.cycle.kind);
            cfg.cycle.t_cold = tmin.unwrap_or(cfg.cycle.t_cold);
            cfg.cycle.t_hot = tmax.unwrap_or(cfg.cycle.t_hot);
        }
        Command::Contour { model, time, plane, level, tmin, tmax } => {
            apply_model(&mut cfg, model);
            apply_sweep(&mut cfg, &SweepArgs { tmin: *tmin, tmax: *tmax, steps: None });
            if let Some(c1) = time.c1 {
                let c2 = time.c2.or(cfg.time.map(|t| t.c2)).unwrap_or(0.0);
                cfg.time = Some(TimeDependence { c1, c2 });
            } else if let (Some(c2), Some(td)) = (time.c2, cfg.time.as_mut()) {
                td.c2 = c2;
            }
            cfg.contour.plane = plane.unwrap_or(cfg.contour.plane);
            cfg.contour.level = level.unwrap_or(cfg.contour.level);
        }
        Command::Phase { model, temperature, branch } => {
            apply_model(&mut cfg, model);
            cfg.phase.t = temperature.unwrap_or(cfg.phase.t);
            cfg.phase.branch = branch.unwrap_or(cfg.phase.branch);
        }
        Command::Isentrope { model, sweep, level, vary } => {
            apply_model(&mut cfg, model);
            apply_sweep(&mut cfg, sweep);
            cfg.isentrope.level = level.or(cfg.isentrope.level);
            cfg.isentrope.vary = vary.unwrap_or(cfg.isentrope.vary);
        }
        Command::Verify => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PTCYCLE_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("PTCYCLE_NUM_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = configure(cli)?;
    let path = cfg.output.path.as_deref();
    let text = match cli.command {
        Command::Thermo { .. } => commands::thermo(&cfg)?,
        Command::Cycle { .. } => commands::cycle(&cfg)?,
        Command::Contour { .. } => commands::contour(&cfg)?,
        Command::Phase { .. } => commands::phase(&cfg)?,
        Command::Isentrope { .. } => commands::isentrope(&cfg)?,
        Command::Verify => {
            let (text, ok) = commands::verify(&cfg)?;
            output::emit(&text, path)?;
            if !ok {
                return Err(CliError::Verify("one or more criteria failed".into()));
            }
            return Ok(());
        }
    };
    output::emit(&text, path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {}", e.code(), e);
            ExitCode::from(e.exit_code())
        }
    }
}
