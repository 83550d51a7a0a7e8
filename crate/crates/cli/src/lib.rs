//! Command-line driver: an expression language over ε-families, grid
//! sweeps, and CSV/JSON reports.

pub mod app;
pub mod config;
pub mod eval;
pub mod expr;
pub mod output;
pub mod qftcmd;
pub mod reproduce;
