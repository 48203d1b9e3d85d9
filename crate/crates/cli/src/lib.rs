//! Command-line front end: MatrixMarket IO, the worked examples, the
//! randomized benchmark and the subcommand implementations.

pub mod bench;
pub mod commands;
pub mod fixtures;
pub mod mtx;
pub mod report;
