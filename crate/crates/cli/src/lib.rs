//! Benchmark harness for the grainstone engine: argument parsing, graph
//! loading, timed trials, oracle verification and report emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod schema;

use std::ffi::OsString;

pub use config::{parse_config, Command, GraphSource, ReportFormat, RunConfig};
pub use error::CliError;
pub use report::{emit_report, CSV_HEADER};
pub use run::{execute, execute_with, Fault, RunReport, VerificationStatus};

/// Parses `argv`, runs the command and returns the process exit code:
/// 0 on success, 1 on runtime errors or failed verification, 2 on usage
/// errors.
pub fn main_with<I, T>(argv: I, fault: Option<Fault>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let command = match parse_config(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match command {
        Command::Run(config) => execute_with(&config, fault).and_then(|report| {
            emit_report(&report, config.report, config.out.as_deref())?;
            if let Some(detail) = report.verification.detail.as_deref().filter(|_| report.exit_code() != 0) {
                eprintln!("verification failed: {detail}");
            }
            Ok(report.exit_code())
        }),
        Command::Gen(config) => commands::generate(&config).and_then(|s| commands::write_json(&s, None)).map(|_| 0),
        Command::Micro(config) => commands::micro(&config)
            .and_then(|r| commands::write_json(&r, config.out.as_deref()))
            .map(|_| 0),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
