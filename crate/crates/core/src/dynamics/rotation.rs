//! Stroboscopic (time-T) maps and Poincaré rotation numbers.

use rayon::prelude::*;

use super::{integrate_particle, OdeOptions, VelocityField};
use crate::error::{Error, Result};
use crate::grid::{grid_point, CircleMap, TWO_PI};

/// Lift of an orientation-preserving circle map.
pub trait CircleLift: Sync {
    fn apply(&self, x: f64) -> f64;
}

impl CircleLift for CircleMap {
    fn apply(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

impl<F: Fn(f64) -> f64 + Sync> CircleLift for F {
    fn apply(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Time-T flow map sampled on a uniform grid and interpolated by a
/// monotone piecewise cubic.
#[derive(Debug, Clone)]
pub struct StroboscopicMap {
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl StroboscopicMap {
    /// Builds the interpolant from samples `F(x_j)` of a lifted map.
    pub fn from_samples(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::Grid(format!("{n} samples are too few")));
        }
        let h = TWO_PI / n as f64;
        let at = |j: isize| -> f64 {
            let turns = j.div_euclid(n as isize);
            values[j.rem_euclid(n as isize) as usize] + TWO_PI * turns as f64
        };
        let mut min_step = f64::INFINITY;
        for j in 0..n as isize {
            min_step = min_step.min(at(j + 1) - at(j));
        }
        if min_step <= 0.0 {
            return Err(Error::NonMonotone(min_step / h));
        }
        let slopes = (0..n as isize)
            .map(|j| {
                let fd = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h);
                let left = (at(j) - at(j - 1)) / h;
                let right = (at(j + 1) - at(j)) / h;
                fd.clamp(0.0, 3.0 * left.min(right))
            })
            .collect();
        Ok(Self { values, slopes })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.n();
        let h = TWO_PI / n as f64;
        let turns = (x / TWO_PI).floor();
        let r = x - turns * TWO_PI;
        let j = ((r / h) as usize).min(n - 1);
        let s = (r - j as f64 * h) / h;
        let (y0, d0) = (self.values[j], self.slopes[j]);
        let (y1, d1) = if j + 1 == n {
            (self.values[0] + TWO_PI, self.slopes[0])
        } else {
            (self.values[j + 1], self.slopes[j + 1])
        };
        let s2 = s * s;
        let s3 = s2 * s;
        let y = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * h * d1;
        y + turns * TWO_PI
    }
}

impl CircleLift for StroboscopicMap {
    fn apply(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// Flow of `ẋ = p(x, t)` over one period `T` from every grid point.
pub fn stroboscopic_map<F: VelocityField + ?Sized>(
    field: &F,
    period: f64,
    n: usize,
    opts: &OdeOptions,
) -> Result<StroboscopicMap> {
    let values = (0..n)
        .into_par_iter()
        .map(|j| {
            let x = grid_point(j, n);
            integrate_particle(field, x, &[0.0, period], opts).map(|tr| tr.positions[1])
        })
        .collect::<Result<Vec<_>>>()?;
    StroboscopicMap::from_samples(values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationOptions {
    pub tol: f64,
    /// Iteration cap for the doubling sequence.
    pub max_iters: usize,
    pub seeds: usize,
}

impl Default for RotationOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iters: 1 << 14, seeds: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEstimate {
    pub delta_phi: f64,
    pub periods_used: usize,
    pub convergence_gap: f64,
}

fn bump(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        (-1.0 / (s * (1.0 - s))).exp()
    }
}

/// Weighted Birkhoff average of the displacements of an orbit.
fn weighted_average(orbit: &[f64], n: usize) -> f64 {
    if n == 1 {
        return orbit[1] - orbit[0];
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let w = bump((i as f64 + 0.5) / n as f64);
        num += w * (orbit[i + 1] - orbit[i]);
        den += w;
    }
    num / den
}

/// Mean advance per iterate, `lim (Fᴺ(x) - x)/N`, averaged over seeds and
/// refined by doubling `N` until successive estimates agree to `tol`.
pub fn rotation_number<F: CircleLift + ?Sized>(map: &F, opts: &RotationOptions) -> Result<RotationEstimate> {
    let seeds = opts.seeds.max(1);
    let mut orbits: Vec<Vec<f64>> = (0..seeds)
        .map(|s| {
            let x = TWO_PI * s as f64 / seeds as f64;
            vec![x, map.apply(x)]
        })
        .collect();
    let estimate = |orbits: &[Vec<f64>], n: usize| {
        orbits.iter().map(|o| weighted_average(o, n)).sum::<f64>() / orbits.len() as f64
    };
    let mut n = 1;
    let mut prev = estimate(&orbits, n);
    let mut gap = f64::INFINITY;
    while 2 * n <= opts.max_iters.max(2) {
        n *= 2;
        orbits.par_iter_mut().for_each(|o| {
            while o.len() <= n {
                let next = map.apply(*o.last().unwrap());
                o.push(next);
            }
        });
        let cur = estimate(&orbits, n);
        gap = (cur - prev).abs();
        prev = cur;
        if gap < opts.tol {
            return Ok(RotationEstimate { delta_phi: cur, periods_used: n, convergence_gap: gap });
        }
    }
    Err(Error::NoConvergence { what: "rotation number", best: prev, gap })
}
