use std::process::ExitCode;

use clap::Parser;
use pml::cli::{run, Cli};
use pml::runner::Runner;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Runner::from_env().and_then(|runner| run(&cli, &runner));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("pml: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
