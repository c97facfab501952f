//! Identity verifier for the deformed toroidal algebra and its oscillator
//! realization.
//!
//! The library side of the `toroidal-verify` binary: configuration
//! resolution ([`config`]), the deterministic sampler ([`sampling`]), and
//! the identity suites themselves ([`suites`]). Reports are canonical —
//! byte-identical for equal configurations — so they can be diffed or
//! archived.

pub mod config;
pub mod sampling;
pub mod suites;

pub use config::{ConfigError, Overrides, ReportFormat, Suite, SuiteConfig};
pub use toroidal_core::report::CheckReport;

/// Run every configured suite and merge the records into one sorted
/// report.
pub fn run_suites(cfg: &SuiteConfig) -> CheckReport {
    let mut report = CheckReport::new();
    for &suite in &cfg.suites {
        report.merge(suites::run(suite, cfg));
    }
    report.finalize();
    report
}

/// Canonical bytes of a report in the requested format.
pub fn emit_report(report: &CheckReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Text => report.to_text().into_bytes(),
        ReportFormat::Json => report.to_json().into_bytes(),
    }
}
