//! Nörlund means of operator powers and their convergence diagnostics.

pub mod ensemble;
mod identity;
mod means;
mod report;

pub use identity::{summation_by_parts_check, summation_by_parts_exact, Entry, IdentityCheck, SquareMatrix};
pub use means::{cesaro_means, check_admissible, noerlund_means, power_drift};
pub use report::{convergence_report, convergence_report_with, ConvergenceReport, Status, TailFit, Thresholds};
