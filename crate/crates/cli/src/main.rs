//! `adsbend`: command-line front end for laminations, equator graphs, ideal
//! polyhedra and earthquakes.

mod commands;
mod output;
mod plot;

use std::process::ExitCode;

use clap::Parser;

use crate::output::Failure;

fn main() -> ExitCode {
    let cli = match commands::Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return Failure::usage(e.kind().to_string()).report();
        }
    };
    if let Ok(n) = std::env::var("ADSBEND_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => return Failure::usage(format!("ADSBEND_THREADS must be a positive integer, got {n:?}")).report(),
        }
    }
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
