use std::path::{Path, PathBuf};
use std::process::ExitCode;

use airyspdc_cli::{load, run_scenario, Diagnostic, RunError, Scenario};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Airy-pumped SPDC scenarios to CSV", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV files
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output.directory`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config file without running it
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the available scenarios
    ListScenarios,
}

const CONFIG_ERROR: u8 = 1;
const NUMERICAL_ERROR: u8 = 2;

fn report(path: &Path, diags: &[Diagnostic]) {
    for d in diags {
        match d.line {
            Some(line) => eprintln!("{}:{line}: {}", path.display(), d.message),
            None => eprintln!("{}: {}", path.display(), d.message),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListScenarios => {
            for s in Scenario::ALL {
                println!("{:<10} {}", s.name(), s.summary());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(_) => ExitCode::SUCCESS,
            Err(diags) => {
                report(&config, &diags);
                ExitCode::from(CONFIG_ERROR)
            }
        },
        Command::Run { config, out } => {
            let cfg = match load(&config) {
                Ok((cfg, _)) => cfg,
                Err(diags) => {
                    report(&config, &diags);
                    return ExitCode::from(CONFIG_ERROR);
                }
            };
            let dir = out.unwrap_or_else(|| cfg.output.directory.clone());
            match run_scenario(&cfg, &dir) {
                Ok(files) => {
                    for f in files {
                        println!("{}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    match e {
                        RunError::Numerical(_) => ExitCode::from(NUMERICAL_ERROR),
                        RunError::Io { .. } => ExitCode::from(CONFIG_ERROR),
                    }
                }
            }
        }
    }
}
