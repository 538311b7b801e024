//! Finite topology workbench.
//!
//! Builds Kuratowski closure operators on finite ground sets, the density
//! topology that makes a chosen strict nonempty subset dense, net-convergence
//! machinery over finite directed sets, and a desk-scale controllability
//! harness that samples attainable sets of controlled systems and checks
//! density-based controllability verdicts.

pub mod closure;
mod error;
pub mod nets;
pub mod reach;
pub mod set;
pub mod topology;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
