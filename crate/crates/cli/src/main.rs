use std::process::ExitCode;

use clap::Parser;
use qlimit_tool::{execute, Cli};

fn main() -> ExitCode {
    ExitCode::from(execute(&Cli::parse()))
}
