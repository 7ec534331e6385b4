use std::process::ExitCode;

use clap::Parser;
use ris_ssm_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ris-ssm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
