mod commands;
mod output;
mod settings;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{emit, JsonObject};
use settings::{with_defaults, Settings};

/// Quantum random walk search on the hypercube.
#[derive(Parser)]
#[command(name = "qrws", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one walk and print its success probability.
    Run(Invocation),
    /// Tabulate the success probability over the (φ, ζ) torus.
    Sweep(Invocation),
    /// Evaluate p along a phase relation ζ(φ).
    Curve(Invocation),
    /// Plateau width of a simulated or loaded curve.
    Width(Invocation),
    /// Search α for the widest plateau.
    OptimizeAlpha(Invocation),
    /// Check the simulator's invariants and print a report.
    Verify(Invocation),
}

#[derive(Args)]
struct Invocation {
    /// JSON file with default settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Print the resolved settings as JSON and exit.
    #[arg(long)]
    dump_config: bool,

    #[command(flatten)]
    settings: Settings,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Verification,
    #[error(transparent)]
    Core(#[from] qrws::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification => 2,
            _ => 1,
        }
    }
}

fn resolve(inv: Invocation, command: &str) -> Result<(Settings, bool), CliError> {
    let base = match &inv.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            Settings::from_json(&text).map_err(CliError::Usage)?
        }
        None => Settings::default(),
    };
    Ok((
        with_defaults(base.overlaid_with(inv.settings), command),
        inv.dump_config,
    ))
}

fn verify(s: &Settings) -> Result<(), CliError> {
    let m = s.m.unwrap_or(4);
    let samples = s.samples.unwrap_or(50);
    let seed = s.seed.unwrap_or(7);
    let checks = verify::run_checks(m, samples, seed)?;
    let digits = s.precision.unwrap_or(17);
    let rows: Vec<JsonObject> = checks
        .iter()
        .map(|c| {
            let mut o = JsonObject::new(digits);
            o.string("name", c.name)
                .real("max_deviation", c.max_deviation)
                .real("tolerance", c.tolerance)
                .boolean("pass", c.passed());
            o
        })
        .collect();
    let all = checks.iter().all(|c| c.passed());
    let mut report = JsonObject::new(digits);
    report
        .int("m", m as u64)
        .int("samples", samples as u64)
        .int("seed", seed)
        .objects("checks", &rows)
        .boolean("pass", all);
    let mut text = report.render();
    text.push('\n');
    emit(s.out.as_deref(), text.as_bytes())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
    if all {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let (name, inv) = match command {
        Command::Run(i) => ("run", i),
        Command::Sweep(i) => ("sweep", i),
        Command::Curve(i) => ("curve", i),
        Command::Width(i) => ("width", i),
        Command::OptimizeAlpha(i) => ("optimize-alpha", i),
        Command::Verify(i) => ("verify", i),
    };
    let (s, dump) = resolve(inv, name)?;
    if dump {
        let mut text = s.to_json();
        text.push('\n');
        return emit(None, text.as_bytes()).map_err(|e| CliError::Usage(e.to_string()));
    }
    match name {
        "run" => commands::run(&s),
        "sweep" => commands::sweep(&s),
        "curve" => commands::curve(&s),
        "width" => commands::width(&s),
        "optimize-alpha" => commands::optimize(&s),
        _ => verify(&s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
