use std::process::ExitCode;

use clap::Parser;

mod io;
mod json;
mod report;
mod run;

fn main() -> ExitCode {
    let cli = run::Cli::parse();
    match run::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fixrank: {}", e);
            ExitCode::from(e.code())
        }
    }
}
