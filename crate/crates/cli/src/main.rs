use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tempus_cli::selftest::run_all;
use tempus_cli::{run_scenario, Scenario, ScenarioConfig};

/// Arrival-time distributions, scattering delays and Lyapunov curves on the half-line.
#[derive(Debug, Parser)]
#[command(name = "tempus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario described by a config file (TOML or JSON).
    Run { config: PathBuf },
    /// List the builtin scenarios.
    List,
    /// Check a config and print it with every default filled in.
    Validate { config: PathBuf },
    /// Run the full property suite.
    Selftest,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c.clamp(0, 255) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for s in Scenario::ALL {
                println!("{:<10} {}", s.name(), s.description());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match ScenarioConfig::load(&config) {
            Ok(cfg) => {
                println!("ok");
                print!("{}", cfg.to_toml());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                code(e.exit_code())
            }
        },
        Command::Run { config } => {
            let result = ScenarioConfig::load(&config).and_then(|cfg| run_scenario(&cfg));
            match result {
                Ok((report, files)) => {
                    println!("{report}");
                    for f in files {
                        println!("wrote {}", f.display());
                    }
                    code(report.exit_code())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    code(e.exit_code())
                }
            }
        }
        Command::Selftest => {
            let results = run_all(|c| println!("{c}"));
            let passed = results.iter().filter(|c| c.check.pass).count();
            println!("{passed}/{} criteria passed", results.len());
            code(if passed == results.len() { 0 } else { 1 })
        }
    }
}
