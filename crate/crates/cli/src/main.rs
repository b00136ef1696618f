//! `rabi-asym`: CSV front end for the asymmetric quantum Rabi model.
//!
//! Exit codes: 0 success, 2 truncation or convergence failure, 3 bad
//! configuration or any other error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let jobs = match &cli.command {
        args::Command::Sweep(a) => a.run.jobs,
        args::Command::PtCompare(a) => a.run.jobs,
        _ => None,
    };
    if let Some(j) = jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(3);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match commands::run(&cli.command) {
        Ok(o) if o.converged => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("error: truncation check failed, data written but not converged");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
