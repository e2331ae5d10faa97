//! Front-end pieces of the analyser: the `.kg` presentation format, DOT
//! export, and the JSON report envelope.

#![forbid(unsafe_code)]

pub mod dot;
pub mod format;
pub mod report;
