//! Library side of the `tightcl` command-line tool: spec files, command
//! execution and reports.

pub mod commands;
pub mod jobspec;
pub mod report;
