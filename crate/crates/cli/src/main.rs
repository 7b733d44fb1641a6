use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use phasegeo_cli::commands::{self, Format};
use phasegeo_cli::sweep::{run_sweep, to_csv, to_json, SweepConfig};
use phasegeo_cli::{tolerance_scale, CliError, Outcome, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "phasegeo",
    version,
    about = "Geometric uncertainty relations for mixed quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worked examples with closed-form answers.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Uncertainty reports for every pair of observables in a file.
    Analyze {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        observables: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
    },
    /// Seeded random sweep over (A, B, rho) triples at a fixed spectrum rank.
    Sweep {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Runs the randomized invariant battery.
    Verify {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Spin-1/2 ensemble rho = diag(p1, 1 - p1) with Sx, Sy.
    Spin {
        #[arg(long)]
        p1: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

impl From<DataFormat> for Format {
    fn from(f: DataFormat) -> Self {
        match f {
            DataFormat::Json => Format::Json,
            DataFormat::Csv => Format::Csv,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(outcome: &Outcome, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, &outcome.output).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{}", outcome.output);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let outcome = match cli.command {
        Command::Demo {
            which: Demo::Spin { p1, hbar, format },
        } => {
            let format = match format {
                TextFormat::Text => Format::Text,
                TextFormat::Json => Format::Json,
            };
            let o = commands::demo_spin(p1, hbar, format, tolerance_scale()?)?;
            emit(&o, None)?;
            o
        }
        Command::Analyze {
            state,
            observables,
            output,
            format,
        } => {
            let o = commands::analyze(&read(&state)?, &read(&observables)?, format.into())?;
            emit(&o, output.as_deref())?;
            o
        }
        Command::Sweep {
            dim,
            rank,
            samples,
            seed,
            hbar,
            format,
            output,
        } => {
            let out = run_sweep(&SweepConfig {
                dim,
                rank,
                samples,
                seed,
                hbar,
            })?;
            let s = &out.summary;
            info!(
                "min slack_geometric {}  min slack_rs {}  geometric wins {}  ties {}  spectrum rejections {}",
                s.min_slack_geometric,
                s.min_slack_rs,
                s.geometric_wins_fraction,
                s.ties_fraction,
                out.spectrum_rejections
            );
            let text = match format {
                DataFormat::Json => to_json(&out),
                DataFormat::Csv => {
                    eprintln!(
                        "summary: min_slack_geometric={} min_slack_rs={} geometric_wins_fraction={} ties_fraction={}",
                        s.min_slack_geometric, s.min_slack_rs, s.geometric_wins_fraction, s.ties_fraction
                    );
                    to_csv(&out)
                }
            };
            let o = Outcome {
                output: text,
                code: EXIT_OK,
            };
            emit(&o, output.as_deref())?;
            o
        }
        Command::Verify { dim, samples, seed } => {
            let o = commands::verify(dim, samples, seed, tolerance_scale()?)?;
            emit(&o, None)?;
            o
        }
    };
    Ok(outcome.code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("phasegeo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
