//! Exhaustive hypothesis checking over small root data, plus the plumbing
//! behind the `adlv` command line tool.

pub mod checkers;
pub mod context;
pub mod error;
pub mod grid;
pub mod report;
pub mod runner;
pub mod sink;
pub mod suite;

pub use error::{LabError, LabResult};
pub use grid::{Cell, CellKind, CheckerConfig, GridEntry, SweepMode};
pub use report::{CheckReport, Status};
pub use runner::{replay, run_checker};
pub use sink::Mode;
pub use suite::{run_suite, Suite, SuiteReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
