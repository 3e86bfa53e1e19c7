use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use roughfilm::cli::{self, CliError, ScenarioSource};
use roughfilm::postprocess::DEFAULT_Z_COUNT;

#[derive(Parser)]
#[command(name = "roughfilm", version, about = "Reynolds lubrication solver with rough-surface homogenization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Scenario config file (key = value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario applied before the config file.
    #[arg(long, value_parser = cli::PRESETS)]
    scenario: Option<String>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
}

impl From<Source> for ScenarioSource {
    fn from(s: Source) -> Self {
        ScenarioSource {
            config: s.config,
            scenario: s.scenario,
            nx: s.nx,
            ny: s.ny,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print N, A(N) and B(N).
    Coeffs {
        #[arg(long, allow_negative_numbers = true)]
        n: f64,
    },
    /// Solve a scenario and write pressure.csv, fields.csv and manifest.txt.
    Solve {
        #[command(flatten)]
        source: Source,
        /// Output directory (defaults to output.dir from the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the through-gap velocity profile at (x, y) as CSV.
    Velocity {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, default_value_t = DEFAULT_Z_COUNT)]
        nz: usize,
    },
    /// Solve with and without roughness and write comparison metrics.
    Compare {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Coeffs { n } => println!("{}", cli::cmd_coeffs(n)?),
        Command::Solve { source, out } => {
            let manifest = cli::cmd_solve(&source.into(), out.as_deref())?;
            for d in &manifest.diagnostics {
                eprintln!(
                    "{}: {} iterations, relative residual {:e}",
                    d.label, d.iterations, d.relative_residual
                );
            }
        }
        Command::Velocity { source, x, y, nz } => {
            print!("{}", cli::cmd_velocity(&source.into(), x, y, nz)?)
        }
        Command::Compare { source, out } => {
            let (_, report) = cli::cmd_compare(&source.into(), out.as_deref())?;
            print!("{}", cli::metrics_text(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
