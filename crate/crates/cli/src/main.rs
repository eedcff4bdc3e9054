use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use tightspan_cli::{error_document, exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.options.out {
                Some(path) => std::fs::write(path, &outcome.document).map(|_| print!("{}", outcome.summary)),
                None => {
                    eprint!("{}", outcome.summary);
                    std::io::stdout().write_all(outcome.document.as_bytes())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            print!("{}", error_document(&err));
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
