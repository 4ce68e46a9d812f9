//! `shadowkin` command-line front end.

mod args;
mod commands;
mod config;
mod error;
mod output;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(payload) = err.payload() {
                println!("{payload}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
