//! Efficiency accounting, statistical helpers and report emission.

mod efficiency;
mod error;
mod report;
pub mod stats;

pub use efficiency::{efficiency, efficiency_table, efficiency_table_csv, EfficiencyInput, EfficiencyResult, ProtocolId};
pub use error::AnalysisError;
pub use report::{build_report, outcome_records, render_outcome, Report, ReportFormat, ReportInputs, RunSummary, Section};
