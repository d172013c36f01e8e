//! Command-line front end and JSON formats for `spin7-core`.
//!
//! Polyforms are `{"dim": 8, "coeffs": {"1,2,3,4": 1.0}}`, metrics are 8×8
//! row-major arrays and spinors are arrays of 16 reals.

pub mod cli;
pub mod json;

pub use cli::{run, Cli, Command};
pub use json::Failure;
