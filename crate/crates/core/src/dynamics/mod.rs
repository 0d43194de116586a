//! Direct numerical treatment of the particle equation `ẋ = p(x, t)`,
//! valid on the whole parameter plane including the resonance wedge.

mod ode;
mod rotation;

pub use ode::{integrate_particle, OdeOptions};
pub use rotation::{
    rotation_number, stroboscopic_map, CircleLift, RotationEstimate, RotationOptions,
    StroboscopicMap,
};

use crate::error::{Error, Result};
use crate::waves::CnoidalWave;

/// Sampled particle path on the real line (not reduced mod 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, positions: Vec<f64>) -> Result<Self> {
        if times.len() != positions.len() {
            return Err(Error::InvalidParams("times and positions differ in length".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams("times must be strictly increasing".into()));
        }
        Ok(Self { times, positions })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.positions.last()?))
    }

    pub fn sup_distance(&self, other: &Trajectory) -> f64 {
        self.positions
            .iter()
            .zip(&other.positions)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eulerian velocity field `p(x, t)`, 2π-periodic in `x`.
pub trait VelocityField: Sync {
    fn velocity(&self, x: f64, t: f64) -> f64;
}

impl VelocityField for CnoidalWave {
    fn velocity(&self, x: f64, t: f64) -> f64 {
        self.profile(x, t)
    }
}

impl<F: Fn(f64, f64) -> f64 + Sync> VelocityField for F {
    fn velocity(&self, x: f64, t: f64) -> f64 {
        self(x, t)
    }
}
