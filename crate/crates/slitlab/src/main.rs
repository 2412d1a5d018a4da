use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slitlab::config::{ScenarioConfig, ScenarioKind};
use slitlab::error::{AppError, AppResult};
use slitlab::scenarios;
use slitlab_core::fringe::PhaseConvention;

#[derive(Parser)]
#[command(name = "slitlab", version, about = "Two-slit interference, Aharonov-Bohm and log-NLS experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form fringe patterns and flux sweep.
    Fringe(RunArgs),
    /// Solenoid runs at several radii against a field-free reference.
    Ab(RunArgs),
    /// One planar wave-packet run through the slits.
    Evolve2d(RunArgs),
    /// Hydrodynamic decomposition and residuals of a 1D run.
    Madelung(RunArgs),
    /// Gausson rigidity check against a linear control.
    Gausson(RunArgs),
    /// Acceptance verdict over the planar and gausson experiments.
    Suite(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Paper,
    Standard,
}

#[derive(Args)]
struct RunArgs {
    /// TOML scenario file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Phase convention of the closed-form comparison.
    #[arg(long, value_enum)]
    convention: Option<Convention>,
    /// Reserved; all scenarios are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &RunArgs, kind: ScenarioKind) -> AppResult<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
            ScenarioConfig::from_toml_str(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(c) = args.convention {
        let mut g = cfg.geometry.unwrap_or_default();
        g.convention = match c {
            Convention::Paper => PhaseConvention::PaperHalf,
            Convention::Standard => PhaseConvention::Standard,
        };
        cfg.geometry = Some(g);
    }
    cfg.resolve(kind)
}

fn execute(cli: Cli) -> AppResult<()> {
    let (kind, args) = match cli.command {
        Command::Fringe(a) => (ScenarioKind::Fringe, a),
        Command::Ab(a) => (ScenarioKind::Ab, a),
        Command::Evolve2d(a) => (ScenarioKind::Evolve2d, a),
        Command::Madelung(a) => (ScenarioKind::Madelung, a),
        Command::Gausson(a) => (ScenarioKind::Gausson, a),
        Command::Suite(a) => (ScenarioKind::Suite, a),
    };
    let cfg = load(&args, kind)?;
    let outcome = scenarios::run(&cfg, &args.out)?;
    for f in &outcome.files {
        println!("{}", f.display());
    }
    match outcome.passed {
        Some(false) => Err(AppError::Verdict(format!("{} checks failed; see {}", kind.name(), args.out.display()))),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
