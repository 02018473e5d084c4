//! Exact heights on stacky curves with coarse space P^1 over Q, and the
//! counting, solubility and linear-programming experiments built on them.

pub mod arith;
pub mod census;
pub mod cli;
pub mod curve;
pub mod diophantine;
pub mod error;
pub mod report;
pub mod vojta;

pub use error::{Error, Result};
