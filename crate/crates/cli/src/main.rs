//! `morseward`: integer persistent homology of filtered digital images.

mod args;
mod error;
mod input;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run::run(&cli.command).and_then(|(text, out)| emit(&text, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morseward: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}
