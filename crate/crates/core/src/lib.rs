//! Correlations and entanglement reachable by global unitaries acting on
//! uncorrelated thermal quantum systems.

pub mod basis;
pub mod correlations;
pub mod energycost;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod optim;
pub mod par;
pub mod protocols;
pub mod selftest;
pub mod thermal;
pub mod thresholds;
pub mod tolerances;

pub use error::{Error, Result};
