//! Executable algorithmic randomness, finite quantum information and free probability.

pub mod acceptance;
pub mod bits;
pub mod casino;
pub mod coding;
pub mod error;
pub mod freeprob;
pub mod exact;
pub mod gambling;
pub mod linalg;
pub mod mltests;
pub mod quantum;
pub mod report;
pub mod prg;
pub mod rng;
pub mod symdyn;

pub use error::{Error, Result};
