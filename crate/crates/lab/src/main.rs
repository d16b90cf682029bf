use std::process::ExitCode;

use clap::Parser;
use dicke_lab::cli::{execute, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}\n\nRun `dicke --help` for usage.");
            return ExitCode::from(2);
        }
    };
    match execute(&config) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
