use std::process::ExitCode;

use clap::Parser;
use lieconf_cli::{execute, Cli};

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok((text, path, passed)) => {
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, &text) {
                        eprintln!("error: cannot write report `{}`: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
