mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use mintwist::Tolerance;

use commands::{Demo, ModelSource, TwistSource};
use report::Report;

/// Checks spectral triples, builds minimal twists and analyzes the Krein
/// structure of their implementing operators.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on input
/// errors.
#[derive(Parser)]
#[command(name = "mintwist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as canonical JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Absolute tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct ModelArgs {
    /// Model JSON file.
    path: Option<PathBuf>,
    /// Use a built-in model instead of a file.
    #[arg(long, value_name = "NAME", conflicts_with = "path")]
    builtin: Option<String>,
}

impl ModelArgs {
    fn source(&self) -> Result<ModelSource<'_>> {
        match (&self.path, &self.builtin) {
            (Some(p), None) => Ok(ModelSource::File(p)),
            (None, Some(name)) => Ok(ModelSource::Builtin(name)),
            _ => bail!("give a model file or --builtin NAME (one of {})", mintwist::BUILTIN_NAMES.join(", ")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the spectral triple axioms.
    Validate(ModelArgs),
    /// Build the minimal twist and check it.
    Twist {
        #[command(flatten)]
        model: ModelArgs,
        /// Source of the twisting operator (default: inline if present).
        #[arg(long, value_enum)]
        by: Option<TwistSource>,
        /// Named operator to test for transparency (default: all).
        #[arg(long = "block", value_name = "NAME")]
        blocks: Vec<String>,
    },
    /// Solve for implementing operators and analyze the twisted product.
    Krein {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        by: Option<TwistSource>,
        /// Preferred implementer: gamma0..gamma3, a named operator, or a JSON matrix.
        #[arg(long, value_name = "NAME|MATRIX")]
        prefer: Option<String>,
    },
    /// Run a worked computation.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    let tol = Tolerance::new(cli.tol)?;
    match &cli.command {
        Command::Validate(m) => Ok(commands::validate(&commands::load(m.source()?)?, tol)),
        Command::Twist { model, by, blocks } => commands::twist(&commands::load(model.source()?)?, *by, blocks, tol),
        Command::Krein { model, by, prefer } => {
            commands::krein(&commands::load(model.source()?)?, *by, prefer.as_deref(), tol)
        }
        Command::Demo { name } => commands::demo(*name, tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_human());
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
