mod args;
mod commands;
mod config;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit status for malformed or inconsistent input.
pub const EXIT_USAGE: u8 = 1;
/// Exit status for numerical failures (non-convergence, accuracy, range).
pub const EXIT_NUMERIC: u8 = 2;
/// Exit status when a verification check fails.
pub const EXIT_VERIFY: u8 = 3;

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os().collect()))
}

fn run(argv: Vec<OsString>) -> u8 {
    let argv = match config::find_path(&argv) {
        Some(path) => match config::load(&path) {
            Ok(extra) => config::merge(argv, extra),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        None => argv,
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
