//! Batch front end for `supnorm-core`: argument parsing, versioned reports,
//! seeded experiments and the acceptance checks.

pub mod cli;
pub mod commands;
pub mod criteria;
pub mod experiments;
pub mod report;

use std::time::Instant;

use cli::{Cli, Format};
use commands::CliError;
use report::Report;

/// Runs one invocation and writes its report. Returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let start = Instant::now();
    let outcome = match commands::run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("supnorm: {e}");
            return e.exit_code();
        }
    };
    let elapsed = cli.timing.then(|| start.elapsed().as_secs_f64());
    let config = serde_json::to_value(cli).expect("arguments are serializable");
    let report = Report::new(cli.command.name(), &config, &outcome, elapsed);
    let text = match (cli.format, &outcome.table) {
        (Format::Csv, Some(table)) => match report.to_csv(table) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("supnorm: {}", CliError::Failure(e.to_string()));
                return 1;
            }
        },
        _ => report.to_json(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("supnorm: cannot write report: {e}");
        return 1;
    }
    outcome.verdict.exit_code()
}
