//! Steady-state and time-dependent Gaussian states of a driven
//! photon–magnon–phonon system, photon–magnon entanglement by logarithmic
//! negativity, and work extraction by Gaussian measurements.
//!
//! Conventions used throughout:
//!
//! - quadrature ordering `X₁, Y₁, X₂, Y₂, …` with vacuum variance `1/2`;
//! - natural logarithms for every entropy, negativity and work;
//! - works are dimensionless, in units of `k_B T`;
//! - angular frequencies (rad/s) internally.

pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod harness;
pub mod model;
pub mod work;

pub use error::{Error, Result};
