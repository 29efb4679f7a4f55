use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use evanescent_cli::{run, Cli, CliError, EXIT_CONFIG};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write stdout: {e}"))),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    if outcome.exit_code != 0 {
        eprintln!("verification failed");
    }
    ExitCode::from(outcome.exit_code as u8)
}
