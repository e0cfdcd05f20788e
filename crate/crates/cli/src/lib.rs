//! Library side of the `hypfrac` command-line tool: campaign configuration,
//! the randomised campaign runner and its report writers.

pub mod campaign;
pub mod config;
pub mod fmt;
pub mod report;
