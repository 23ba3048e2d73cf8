//! Scenario files, reports and the batch runner behind the command-line tool.

pub mod batch;
pub mod report;
pub mod scenario;

pub use batch::{batch_run, scenario_files, BatchFailure, BatchSummary};
pub use report::{run_scenario, scenario_digest, AnalysisRecord, Report, WallClock, FORMAT_VERSION, TOOL_VERSION};
pub use scenario::{parse_scenario, Analysis, Scenario};

/// Process exit status for success.
pub const EXIT_OK: i32 = 0;
/// Some contract was violated or an analysis failed.
pub const EXIT_VIOLATION: i32 = 1;
/// Bad usage, unreadable input or a malformed scenario.
pub const EXIT_USAGE: i32 = 2;
