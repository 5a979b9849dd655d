mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::commands::Status;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::Usage as u8),
            };
        }
    };
    match commands::run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(failure) => {
            eprintln!("degen: {failure}");
            ExitCode::from(failure.status as u8)
        }
    }
}
