use clap::Parser;
use jackson_cli::error::{EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use jackson_cli::{run, Cli};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.text),
                None => std::io::stdout().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CHECK_FAILED as u8);
            }
            if let Some(s) = &outcome.summary {
                eprintln!("{s}");
            }
            ExitCode::from(if outcome.failed { EXIT_CHECK_FAILED } else { EXIT_OK } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
