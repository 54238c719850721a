//! Degrees-of-freedom bounds for the K-user interference channel assisted by an
//! intelligent reflecting surface (IRS).
//!
//! The crate covers closed-form bounds for active surfaces, Monte Carlo
//! estimators for passive and ε-relaxed lossless surfaces, and a rank-based
//! checker for the interference-alignment construction.

pub mod channel_model;
pub mod cli_reports;
pub mod dof_bounds;
pub mod error;
pub mod ia_verifier;
pub mod irs_solvers;
pub mod mc_engine;
pub mod network_topology;
pub mod numerics;

pub use error::{Error, Result};
pub use num_complex::Complex64;
