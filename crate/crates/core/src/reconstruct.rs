//! Uniformization of amenable cnoidal waves and exact particle motion.
//!
//! Outside the resonance wedge `p(x) - v` has no roots and
//!
//! ```text
//! (g0⁻¹)'(x) = 𝒱 / (p(x) - v),      x(t) = g0(g0⁻¹(x0) + 𝒱t) + vt,
//! ```
//!
//! so the drift velocity is `v + 𝒱`. Inside the wedge particles lock onto
//! the wave and drift at `v`.

use std::f64::consts::PI;

use crate::dynamics::Trajectory;
use crate::elliptic::{complete_pi, incomplete_pi, jacobi_am, sn_cn_dn};
use crate::error::{Error, Result};
use crate::grid::{CircleMap, GridField, TWO_PI};
use crate::waves::{travelling_constants, uniform_representative, CnoidalParams, CnoidalWave};

const QUADRATURE_START: usize = 1 << 12;
const QUADRATURE_MAX: usize = 1 << 20;
const QUADRATURE_TOL: f64 = 1e-11;
const BOOST_TOL: f64 = 1e-14;

/// Characteristic `n̂ = m/(V + (m+1)/3)`.
fn characteristic(p: &CnoidalParams) -> f64 {
    let (_, _, e3) = p.roots();
    p.m / (p.rescaled_v - e3)
}

/// `𝒱 = -(cK³/3π²)(V + (m+1)/3) / Π(n̂|m)`; zero on the wedge boundary.
pub fn cal_v(p: &CnoidalParams) -> Result<f64> {
    if p.in_resonance_wedge() {
        return Err(Error::ResonanceWedge { m: p.m, v: p.rescaled_v });
    }
    let (_, _, e3) = p.roots();
    let d = p.rescaled_v - e3;
    if d == 0.0 {
        return Ok(0.0);
    }
    let n_hat = p.m / d;
    if n_hat >= 1.0 {
        return Ok(0.0);
    }
    let wave = CnoidalWave::new(*p);
    let k = wave.k_m;
    Ok(-p.c * k * k * k / (3.0 * PI * PI) * d / complete_pi(n_hat, p.m)?)
}

/// `𝒱 = 2π / ∫₀^{2π} dx/(p(x) - v)` by the periodic trapezoid rule,
/// doubling the grid until successive estimates agree.
pub fn cal_v_quadrature(profile: impl Fn(f64) -> f64, v: f64) -> Result<f64> {
    let integral = |n: usize| -> Result<f64> {
        let h = TWO_PI / n as f64;
        let mut sum = 0.0;
        let mut sign = 0.0;
        for j in 0..n {
            let d = profile(j as f64 * h) - v;
            if sign * d < 0.0 || d == 0.0 {
                return Err(Error::RootDetected);
            }
            sign = d.signum();
            sum += 1.0 / d;
        }
        Ok(sum * h)
    };
    let mut n = QUADRATURE_START;
    let mut prev = TWO_PI / integral(n)?;
    while n < QUADRATURE_MAX {
        n *= 2;
        let cur = TWO_PI / integral(n)?;
        if (cur - prev).abs() <= QUADRATURE_TOL * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence { what: "drift quadrature", best: prev, gap: f64::NAN })
}

/// The cnoidal boost: `g0⁻¹(x) = φ + π Π(n̂, am(K(x-x0)/π)|m) / Π(n̂|m)`.
#[derive(Debug, Clone, Copy)]
pub struct UniformizingMap {
    pub wave: CnoidalWave,
    pub phi: f64,
    pub cal_v: f64,
    n_hat: f64,
    pi_complete: f64,
}

impl UniformizingMap {
    pub fn new(p: &CnoidalParams, phi: f64) -> Result<Self> {
        let n_hat = characteristic(p);
        if p.in_resonance_wedge() || p.wedge_distance() == 0.0 || n_hat >= 1.0 {
            return Err(Error::ResonanceWedge { m: p.m, v: p.rescaled_v });
        }
        Ok(Self {
            wave: CnoidalWave::new(*p),
            phi,
            cal_v: cal_v(p)?,
            n_hat,
            pi_complete: complete_pi(n_hat, p.m)?,
        })
    }

    fn scaled(&self, x: f64) -> f64 {
        self.wave.k_m / PI * (x - self.wave.params.x0)
    }

    /// `g0⁻¹(x)`, equivariant under `x → x + 2π`.
    pub fn inverse(&self, x: f64) -> f64 {
        let m = self.wave.params.m;
        let amp = jacobi_am(self.scaled(x), m).expect("validated parameter");
        let pi_inc = incomplete_pi(self.n_hat, amp, m).expect("validated characteristic");
        self.phi + PI * pi_inc / self.pi_complete
    }

    /// `(g0⁻¹)'(x) = (K/Π)/(1 - n̂ sn²) = 𝒱/(p(x) - v)`.
    pub fn inverse_derivative(&self, x: f64) -> f64 {
        let sn = sn_cn_dn(self.scaled(x), self.wave.params.m).expect("validated parameter").sn;
        self.wave.k_m / self.pi_complete / (1.0 - self.n_hat * sn * sn)
    }

    /// `g0(y)`: the unique `x` with `g0⁻¹(x) = y`.
    pub fn forward(&self, y: f64) -> Result<f64> {
        let z = y - self.phi;
        let turns = (z / TWO_PI).floor();
        let r = z - turns * TWO_PI;
        let x0 = self.wave.params.x0;
        let target = r + self.phi;
        let (mut lo, mut hi) = (0.0, TWO_PI);
        let mut s = r;
        for _ in 0..200 {
            if !(s >= lo && s <= hi) {
                s = 0.5 * (lo + hi);
            }
            let res = self.inverse(x0 + s) - target;
            if res > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            if res.abs() <= BOOST_TOL * (1.0 + target.abs()) || hi - lo <= BOOST_TOL {
                return Ok(x0 + s + turns * TWO_PI);
            }
            s -= res / self.inverse_derivative(x0 + s);
        }
        Err(Error::NoConvergence { what: "boost inversion", best: x0 + s + turns * TWO_PI, gap: hi - lo })
    }

    /// `g0⁻¹` sampled as a circle map.
    pub fn inverse_map(&self, n: usize) -> Result<CircleMap> {
        CircleMap::from_fn(n, |x| self.inverse(x))
    }

    /// `g0` sampled as a circle map.
    pub fn forward_map(&self, n: usize) -> Result<CircleMap> {
        let disp = (0..n)
            .map(|j| {
                let y = TWO_PI * j as f64 / n as f64;
                self.forward(y).map(|x| x - y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CircleMap::from_displacement(GridField::new(disp)?))
    }
}

/// `x(t) = g0(g0⁻¹(x_start) + 𝒱t) + vt`.
pub fn exact_trajectory(p: &CnoidalParams, x_start: f64, times: &[f64]) -> Result<Trajectory> {
    let map = UniformizingMap::new(p, 0.0)?;
    let base = map.inverse(x_start);
    let v = map.wave.velocity;
    let positions = times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Ok(x_start)
            } else {
                map.forward(base + map.cal_v * t).map(|y| y + v * t)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(times.to_vec(), positions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftRegime {
    Amenable,
    Locked,
    Boundary,
}

impl DriftRegime {
    pub fn label(self) -> &'static str {
        match self {
            DriftRegime::Amenable => "amenable",
            DriftRegime::Locked => "locked",
            DriftRegime::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftResult {
    pub velocity: f64,
    pub v_drift: f64,
    /// `v_drift · T`; absent for a standing wave.
    pub delta_phi: Option<f64>,
    pub period: Option<f64>,
    pub regime: DriftRegime,
}

pub fn drift_velocity(p: &CnoidalParams) -> Result<DriftResult> {
    let wave = CnoidalWave::new(*p);
    let v = wave.velocity;
    let period = wave.period();
    let (v_drift, regime) = if p.in_resonance_wedge() {
        (v, DriftRegime::Locked)
    } else {
        let cv = cal_v(p)?;
        let regime = if cv == 0.0 { DriftRegime::Boundary } else { DriftRegime::Amenable };
        (v + cv, regime)
    };
    let delta_phi = match (regime, period) {
        (DriftRegime::Locked, Some(_)) => Some(TWO_PI * v.signum()),
        (_, Some(t)) => Some(v_drift * t),
        (_, None) => None,
    };
    Ok(DriftResult { velocity: v, v_drift, delta_phi, period, regime })
}

/// `|k𝒱² + B + Av| / max(1, |B|)`.
pub fn amenability_residual(p: &CnoidalParams) -> Result<f64> {
    let tc = travelling_constants(p);
    let k = uniform_representative(p)?;
    let cv = cal_v(p)?;
    Ok((k * cv * cv + tc.b + tc.a * tc.v).abs() / tc.b.abs().max(1.0))
}

/// Residual of the cubic identity
/// `(V-e1)(V-e2)(V-e3) = ([K ζ(u) - ζ(K) u] (V-e3) / Π(n̂|m))²`,
/// relative to `max(1, |lhs|)`.
pub fn cubic_identity_residual(p: &CnoidalParams) -> Result<f64> {
    if p.in_resonance_wedge() {
        return Err(Error::ResonanceWedge { m: p.m, v: p.rescaled_v });
    }
    let (e1, e2, e3) = p.roots();
    let vv = p.rescaled_v;
    let lhs = (vv - e1) * (vv - e2) * (vv - e3);
    let bracket = crate::waves::lattice_bracket(p.m, vv)?;
    let pi = complete_pi(characteristic(p), p.m)?;
    let rhs = bracket * (vv - e3) / pi;
    let rhs = rhs * rhs;
    Ok(((lhs - rhs.re).abs() + rhs.im.abs()) / lhs.abs().max(1.0))
}
