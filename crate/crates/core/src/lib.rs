//! Simulation and analysis of quantum random walk search on the hypercube
//! with generalized Householder-reflection coins.
//!
//! - [`coin`]: walk and marking coins, phase relations `ζ(φ)`
//! - [`walk`]: state-vector engine for the standard and marking-coin-free circuits
//! - [`dense`]: dense one-step operators used as a differential oracle
//! - [`landscape`]: phase sweeps, robustness curves, plateau width and α search

pub mod coin;
pub mod dense;
pub mod error;
pub mod landscape;
pub mod walk;

pub use error::{Error, Result};
