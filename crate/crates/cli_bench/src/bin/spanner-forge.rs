use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cli_bench::{exit, run, Cli};

fn main() -> ExitCode {
    if let Ok(t) = std::env::var("SPANNER_FORGE_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                graph_core::par::configure_threads(n);
            }
            _ => {
                eprintln!("spanner-forge: SPANNER_FORGE_THREADS must be a positive integer, got {t:?}");
                return ExitCode::from(exit::USAGE as u8);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("spanner-forge: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("spanner-forge: i/o: {e}");
        return ExitCode::from(exit::IO as u8);
    }
    ExitCode::from(outcome.code as u8)
}
