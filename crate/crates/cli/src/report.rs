//! Report emission as pretty JSON or one CSV row per trial.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::config::ReportFormat;
use crate::error::CliError;
use crate::run::{RunReport, VerificationStatus};

/// Column order of CSV reports. Every trial is one row; the run-level
/// columns repeat on each row.
pub const CSV_HEADER: [&str; 15] = [
    "algo",
    "variant",
    "graph",
    "graph_sha256",
    "threads",
    "policy",
    "page_size",
    "trial",
    "rounds",
    "operator_applications",
    "edges_relaxed",
    "wall_ms",
    "mean_wall_ms",
    "verification",
    "first_mismatch",
];

pub fn write_report(report: &RunReport, format: ReportFormat, w: impl Write) -> Result<(), CliError> {
    match format {
        ReportFormat::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, report)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        ReportFormat::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(CSV_HEADER)?;
            let c = &report.config;
            let status = match report.verification.status {
                VerificationStatus::Skipped => "skipped",
                VerificationStatus::Passed => "passed",
                VerificationStatus::Failed => "failed",
            };
            let mismatch = report.verification.first_mismatch.map(|n| n.to_string()).unwrap_or_default();
            for (i, t) in report.trials.iter().enumerate() {
                csv.write_record([
                    c.algo.name(),
                    c.variant.name(),
                    &report.graph.source,
                    &report.graph.sha256,
                    &c.threads.to_string(),
                    &c.policy.to_string(),
                    &c.page_size.to_string(),
                    &(i + 1).to_string(),
                    &t.rounds.to_string(),
                    &t.operator_applications.to_string(),
                    &t.edges_relaxed.to_string(),
                    &t.wall_ms.to_string(),
                    &report.mean_wall_ms.to_string(),
                    status,
                    &mismatch,
                ])?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

/// Writes the report to `path`, or stdout when none is given.
pub fn emit_report(report: &RunReport, format: ReportFormat, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::File {
                path: path.to_owned(),
                source,
            })?;
            write_report(report, format, BufWriter::new(file))
        }
        None => write_report(report, format, io::stdout().lock()),
    }
}
