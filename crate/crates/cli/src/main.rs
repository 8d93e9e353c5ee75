use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sodkit_cli::{config::ProjectConfig, CliError, CommandResult, OutputFormat};

#[derive(Parser)]
#[command(
    name = "sodkit",
    version,
    about = "Window cells and semiorthogonal decomposition combinatorics for quasi-symmetric linear quotients"
)]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Enumeration radius (rational), overriding the config.
    #[arg(long, global = true)]
    radius: Option<String>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Svg,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
            Format::Svg => OutputFormat::Svg,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run all load-time invariants and report the first failure.
    Check,
    /// Print the weight polytope: rays, intervals, lattice points.
    Polytope,
    /// Find the unique cell containing a weight.
    Locate {
        /// Integer weight, e.g. "3,0".
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Enumerate summands within the radius (SVG available at rank 2).
    Enumerate,
    /// Presentation of an induced generator.
    Bwb {
        /// Rational cocharacter, e.g. "-1,1".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Integer weight in the window of lambda.
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Semiorthogonality and full-faithfulness inequality suites.
    Verify,
    /// Partition-labelled table for a quiver config.
    Quiver,
    /// Levi subgroup table with slope tests and curve labels.
    Levis {
        /// Levi-invariant rational weight.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Curve factor, e.g. "2" for genus 2 Higgs-type labels.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<CommandResult, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let cfg = ProjectConfig::load(path)?;
    match &cli.command {
        Command::Check => sodkit_cli::run_check(&cfg),
        Command::Polytope => sodkit_cli::run_polytope(&cfg, cli.format.into()),
        Command::Locate { weight } => sodkit_cli::run_locate(&cfg, weight),
        Command::Enumerate => {
            sodkit_cli::run_enumerate(&cfg, cli.radius.as_deref(), cli.format.into())
        }
        Command::Bwb { lambda, weight } => {
            sodkit_cli::run_bwb(&cfg, lambda, weight, cli.format.into())
        }
        Command::Verify => sodkit_cli::run_verify(&cfg, cli.radius.as_deref(), cli.seed),
        Command::Quiver => {
            sodkit_cli::run_quiver(&cfg, cli.radius.as_deref(), cli.format.into())
        }
        Command::Levis { weight, kappa } => {
            sodkit_cli::run_levis(&cfg, weight.as_deref(), kappa.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &result.output) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", result.output);
            }
            if result.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
