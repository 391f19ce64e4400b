use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments.
    ExitCode::from(ncosc_cli::run(ncosc_cli::Cli::parse()))
}
