use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = dengdim::cli::Cli::parse();
    match dengdim::cli::execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error [{}]: {}", err.stage, err.source);
            ExitCode::from(2)
        }
    }
}
