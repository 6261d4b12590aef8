//! File formats and the command-line front end for `kgexplain-core`.
//!
//! * [`transfers`]: transfer-log CSV.
//! * [`config`]: flat JSON run configuration.
//! * [`report`]: JSON reports (evidences, alignments, justifications,
//!   planted ground truth).
//! * [`scenario`]: domain directories and synthetic scenario output.
//! * [`run`]: the `kgexplain` command.

pub mod config;
pub mod fs;
pub mod report;
pub mod scenario;
pub mod transfers;

mod cli;

pub use cli::run;
