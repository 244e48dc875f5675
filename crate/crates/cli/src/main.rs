use std::io;
use std::process::ExitCode;

use clap::Parser;
use gausscap_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, io::stdout().lock(), io::stderr().lock()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("gcap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
