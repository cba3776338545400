//! File formats and the `strength` command-line front end.

pub mod app;
pub mod format;
