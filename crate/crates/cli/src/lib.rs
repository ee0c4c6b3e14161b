//! Support code for the `ccsched` command: the JSON instance format,
//! generator families, benchmark runs and CSV reports.

pub mod bench;
pub mod family;
pub mod format;
pub mod report;
