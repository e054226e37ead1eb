use std::process::ExitCode;

use clap::Parser;
use ebsim_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ebsim: {e}");
            e.exit_code()
        }
    }
}
