//! Particle drift, rotation numbers and phase decomposition for periodic
//! travelling waves of the KdV equation
//!
//! ```text
//! ∂p/∂t + 3 p ∂p/∂x - (c/12) ∂³p/∂x³ = 0,   x ∈ [0, 2π)
//! ```
//!
//! Cnoidal waves are handled in closed form through [`elliptic`]; the
//! [`dynamics`] and [`spectral`] modules are independent numerical oracles.

pub mod elliptic;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod phases;
pub mod reconstruct;
pub mod spectral;
pub mod waves;

pub use error::{Error, Result};
