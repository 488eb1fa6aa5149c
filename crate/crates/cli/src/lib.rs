//! Report types and rendering shared by the `ablkit` binary and its tests.

pub mod format;
pub mod report;
