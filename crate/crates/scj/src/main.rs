use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    scj::cli::main(scj::cli::Cli::parse())
}
