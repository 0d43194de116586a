//! Dormand–Prince 5(4) for the scalar particle equation.

use super::{Trajectory, VelocityField};
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Mixed absolute/relative local error target per step.
    pub tol: f64,
    /// Take uniform steps of this size instead of adapting.
    pub fixed_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tol: 1e-10, fixed_step: None, max_steps: 50_000_000 }
    }
}

struct Stepper<'a, F: VelocityField + ?Sized> {
    field: &'a F,
    k: [f64; 7],
    fsal: Option<f64>,
}

impl<'a, F: VelocityField + ?Sized> Stepper<'a, F> {
    /// One step; returns the fifth-order value and the error estimate.
    fn step(&mut self, t: f64, x: f64, h: f64) -> (f64, f64) {
        self.k[0] = self.fsal.unwrap_or_else(|| self.field.velocity(x, t));
        for s in 1..7 {
            let mut inc = 0.0;
            for (a, k) in A[s].iter().zip(&self.k).take(s) {
                inc += a * k;
            }
            self.k[s] = self.field.velocity(x + h * inc, t + C[s] * h);
        }
        let x_new = x + h * (A[6].iter().zip(&self.k).map(|(a, k)| a * k).sum::<f64>());
        let err = h * E.iter().zip(&self.k).map(|(e, k)| e * k).sum::<f64>();
        (x_new, err)
    }
}

/// Integrates `ẋ = p(x, t)` from `(times[0], x_start)`, reporting the
/// position at every entry of `times` (strictly increasing).
pub fn integrate_particle<F: VelocityField + ?Sized>(
    field: &F,
    x_start: f64,
    times: &[f64],
    opts: &OdeOptions,
) -> Result<Trajectory> {
    if times.is_empty() {
        return Trajectory::new(vec![], vec![]);
    }
    if !(1e-13..=1e-6).contains(&opts.tol) && opts.fixed_step.is_none() {
        return Err(Error::InvalidParams(format!("tol = {} outside [1e-13, 1e-6]", opts.tol)));
    }
    let mut stepper = Stepper { field, k: [0.0; 7], fsal: None };
    let mut t = times[0];
    let mut x = x_start;
    let mut positions = vec![x_start];
    let mut h = opts.fixed_step.unwrap_or_else(|| {
        let v = field.velocity(x, t).abs().max(1e-3);
        (0.01 * opts.tol.powf(0.2) / v).max(1e-6)
    });
    let mut err_prev = 1.0f64;
    let mut steps = 0usize;
    for &target in &times[1..] {
        if target <= t {
            return Err(Error::InvalidParams("times must be strictly increasing".into()));
        }
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepUnderflow(t));
            }
            let remaining = target - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let hs = if last { remaining } else { h };
            let (x_new, err) = stepper.step(t, x, hs);
            if let Some(fixed) = opts.fixed_step {
                t = if last { target } else { t + hs };
                x = x_new;
                stepper.fsal = Some(stepper.k[6]);
                h = fixed;
                continue;
            }
            let scale = opts.tol * (1.0 + x.abs().max(x_new.abs()));
            let ratio = (err.abs() / scale).max(1e-10);
            if ratio <= 1.0 {
                t = if last { target } else { t + hs };
                x = x_new;
                stepper.fsal = Some(stepper.k[6]);
                let factor = 0.9 * ratio.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
                err_prev = ratio;
                if !last {
                    h = hs * factor.clamp(0.2, 5.0);
                } else {
                    h = h.max(hs);
                }
            } else {
                stepper.fsal = Some(stepper.k[0]);
                h = hs * (0.9 * ratio.powf(-0.2)).max(0.1);
                if h <= 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow(t));
                }
            }
        }
        positions.push(x);
    }
    Trajectory::new(times.to_vec(), positions)
}
