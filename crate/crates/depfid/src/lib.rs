//! Command-line audit of covariance-level dependence fidelity.
//!
//! Reads reference and synthetic samples from CSV, runs the diagnostics of
//! [`depfid_core`] and renders JSON or Markdown reports. Also generates the
//! closed-form scenario datasets, the eigengap sweep and joint-tail tables.

pub mod audit;
pub mod commands;
pub mod csv_io;
pub mod error;
pub mod pca;
pub mod report;

pub use audit::{exit_code_policy, run_audit, AuditOptions, AuditReport, SubsetOptions};
pub use error::{DepfidError, Result};
pub use report::{emit_report, ReportFormat};
