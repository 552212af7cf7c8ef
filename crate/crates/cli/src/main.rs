use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cdsp_cli::Cli::parse();
    ExitCode::from(cdsp_cli::run(&cli))
}
