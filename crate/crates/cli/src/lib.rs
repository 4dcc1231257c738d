//! Text format, reports and commands for the `rotplan` tool.

pub mod format;
pub mod commands;
pub mod report;
