//! Cnoidal travelling waves, wedge classification, the uniform orbit
//! representative and the Virasoro coadjoint action.
//!
//! A cnoidal wave with pointedness `m` and rescaled velocity `V` is
//!
//! ```text
//! p(x, t) = (cK²/3π²) [ V/2 - (m+1)/3 + m sn²((K/π)(x - x0 - vt) | m) ],   v = cK²V/(2π²)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::elliptic::{
    complete_e, complete_k, sn_cn_dn, weierstrass_p_inverse, weierstrass_zeta, EllipticError,
    WeierstrassLattice,
};
use crate::error::{Error, Result};
use crate::grid::{CircleMap, GridField};

/// Largest imaginary part of `k` accepted as round-off.
const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalParams {
    pub m: f64,
    /// Rescaled velocity `V`.
    pub rescaled_v: f64,
    pub c: f64,
    pub x0: f64,
}

impl CnoidalParams {
    pub fn new(m: f64, rescaled_v: f64, c: f64) -> Result<Self> {
        Self::with_offset(m, rescaled_v, c, 0.0)
    }

    pub fn with_offset(m: f64, rescaled_v: f64, c: f64, x0: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&m) {
            return Err(Error::InvalidParams(format!("m = {m} outside [0, 1)")));
        }
        if !rescaled_v.is_finite() {
            return Err(Error::InvalidParams(format!("V = {rescaled_v} is not finite")));
        }
        if !c.is_finite() || c == 0.0 {
            return Err(Error::InvalidParams(format!("c = {c} must be finite and nonzero")));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParams(format!("x0 = {x0} is not finite")));
        }
        Ok(Self { m, rescaled_v, c, x0 })
    }

    /// Weierstrass roots `(e1, e2, e3)` of the cnoidal lattice.
    pub fn roots(&self) -> (f64, f64, f64) {
        let m = self.m;
        ((2.0 - m) / 3.0, (2.0 * m - 1.0) / 3.0, -(m + 1.0) / 3.0)
    }

    /// `-(m+1)/3 < V < (2m-1)/3`.
    pub fn in_resonance_wedge(&self) -> bool {
        let (_, e2, e3) = self.roots();
        self.rescaled_v > e3 && self.rescaled_v < e2
    }

    /// Distance of `V` to the closed resonance wedge (zero inside).
    pub fn wedge_distance(&self) -> f64 {
        let (_, e2, e3) = self.roots();
        let v = self.rescaled_v;
        if v >= e2 {
            v - e2
        } else if v <= e3 {
            e3 - v
        } else {
            0.0
        }
    }
}

/// `(2-4m)/3 < V < (2+2m)/3`: the profile itself has real roots.
pub fn in_root_wedge(p: &CnoidalParams) -> bool {
    let (m, v) = (p.m, p.rescaled_v);
    v > (2.0 - 4.0 * m) / 3.0 && v < (2.0 + 2.0 * m) / 3.0
}

/// `v = cK²V/(2π²)`.
pub fn wave_velocity(p: &CnoidalParams) -> f64 {
    let k = complete_k(p.m).expect("validated parameter");
    p.c * k * k * p.rescaled_v / (2.0 * PI * PI)
}

/// Cnoidal wave with its elliptic constants evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct CnoidalWave {
    pub params: CnoidalParams,
    pub k_m: f64,
    pub e_m: f64,
    pub velocity: f64,
    /// `cK²/(3π²)`.
    pub amplitude: f64,
}

impl CnoidalWave {
    pub fn new(params: CnoidalParams) -> Self {
        let k_m = complete_k(params.m).expect("validated parameter");
        let e_m = complete_e(params.m).expect("validated parameter");
        let amplitude = params.c * k_m * k_m / (3.0 * PI * PI);
        Self { params, k_m, e_m, velocity: 1.5 * amplitude * params.rescaled_v, amplitude }
    }

    fn argument(&self, x: f64, t: f64) -> f64 {
        self.k_m / PI * (x - self.params.x0 - self.velocity * t)
    }

    fn offset(&self) -> f64 {
        self.params.rescaled_v / 2.0 - (self.params.m + 1.0) / 3.0
    }

    pub fn profile(&self, x: f64, t: f64) -> f64 {
        let m = self.params.m;
        let s = sn_cn_dn(self.argument(x, t), m).expect("validated parameter").sn;
        self.amplitude * (self.offset() + m * s * s)
    }

    /// `∂p/∂x`.
    pub fn profile_dx(&self, x: f64, t: f64) -> f64 {
        let m = self.params.m;
        let j = sn_cn_dn(self.argument(x, t), m).expect("validated parameter");
        self.amplitude * m * 2.0 * j.sn * j.cn * j.dn * self.k_m / PI
    }

    /// `∂²p/∂x²`.
    pub fn profile_dxx(&self, x: f64, t: f64) -> f64 {
        let m = self.params.m;
        let j = sn_cn_dn(self.argument(x, t), m).expect("validated parameter");
        let (s2, c2, d2) = (j.sn * j.sn, j.cn * j.cn, j.dn * j.dn);
        let q = self.k_m / PI;
        self.amplitude * m * 2.0 * q * q * (c2 * d2 - s2 * d2 - m * s2 * c2)
    }

    /// Spatial mean `(1/2π)∫p dx = (cK²/3π²)[V/2 + (2-m)/3 - E/K]`.
    pub fn mean(&self) -> f64 {
        let p = &self.params;
        self.amplitude * (p.rescaled_v / 2.0 + (2.0 - p.m) / 3.0 - self.e_m / self.k_m)
    }

    /// Time period `2π/|v|`, absent for a standing wave.
    pub fn period(&self) -> Option<f64> {
        (self.velocity != 0.0).then(|| 2.0 * PI / self.velocity.abs())
    }

    pub fn sample(&self, n: usize, t: f64) -> Result<GridField> {
        GridField::from_fn(n, |x| self.profile(x, t))
    }
}

/// Detection thresholds for [`classify_orbit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Wedge-boundary and exceptional-k tolerance, in units of `|c|`.
    pub eps: f64,
    /// Near-zero `k` threshold, in units of `|c|`.
    pub eps_k: f64,
    /// Largest `n` scanned for `k = -n²c/24`.
    pub n_max: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps: 1e-8, eps_k: 1e-6, n_max: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitClass {
    Amenable { k: f64 },
    ResonanceWedge,
    WedgeBoundary { k: f64 },
    ExceptionalK { n: u32, k: f64 },
    NearSingularK { k: f64 },
}

impl OrbitClass {
    pub fn label(&self) -> &'static str {
        match self {
            OrbitClass::Amenable { .. } => "amenable",
            OrbitClass::ResonanceWedge => "resonance-wedge",
            OrbitClass::WedgeBoundary { .. } => "wedge-boundary",
            OrbitClass::ExceptionalK { .. } => "exceptional-k",
            OrbitClass::NearSingularK { .. } => "near-singular-k",
        }
    }

    pub fn k(&self) -> Option<f64> {
        match *self {
            OrbitClass::Amenable { k }
            | OrbitClass::WedgeBoundary { k }
            | OrbitClass::ExceptionalK { k, .. }
            | OrbitClass::NearSingularK { k } => Some(k),
            OrbitClass::ResonanceWedge => None,
        }
    }
}

pub fn classify_orbit(p: &CnoidalParams, tol: &Tolerances) -> OrbitClass {
    let (_, e2, e3) = p.roots();
    let v = p.rescaled_v;
    let scale = p.c.abs();
    if p.m > 0.0 && ((v - e2).abs() <= tol.eps || (v - e3).abs() <= tol.eps) {
        return OrbitClass::WedgeBoundary { k: -p.c / 24.0 };
    }
    if p.in_resonance_wedge() {
        return OrbitClass::ResonanceWedge;
    }
    let k = match uniform_representative(p) {
        Ok(k) => k,
        Err(_) => return OrbitClass::ResonanceWedge,
    };
    for n in 1..=tol.n_max {
        let nf = n as f64;
        if (k + nf * nf * p.c / 24.0).abs() <= tol.eps * scale {
            return OrbitClass::ExceptionalK { n, k };
        }
    }
    if k.abs() < tol.eps_k * scale {
        return OrbitClass::NearSingularK { k };
    }
    OrbitClass::Amenable { k }
}

/// `K ζ(u) - ζ(K) u` with `u = ℘⁻¹(V)` on the cnoidal lattice.
pub fn lattice_bracket(m: f64, rescaled_v: f64) -> Result<Complex64> {
    let lat = WeierstrassLattice::cnoidal(m)?;
    let u = weierstrass_p_inverse(rescaled_v, &lat)?;
    let zeta_u = weierstrass_zeta(u, &lat)?;
    Ok(lat.omega1 * zeta_u - lat.eta1() * u)
}

/// Constant `k` in the coadjoint orbit of the cnoidal profile,
/// `k = (c/6π²)[K ζ(u) - ζ(K) u]²`, `u = ℘⁻¹(V)`.
pub fn uniform_representative(p: &CnoidalParams) -> Result<f64> {
    if p.in_resonance_wedge() {
        return Err(Error::ResonanceWedge { m: p.m, v: p.rescaled_v });
    }
    if p.m == 0.0 {
        return Ok(p.c / 12.0 * (p.rescaled_v / 2.0 - 1.0 / 3.0));
    }
    let b = lattice_bracket(p.m, p.rescaled_v)?;
    let sq = b * b;
    if sq.im.abs() > IMAG_TOL * sq.re.abs().max(1.0) {
        return Err(EllipticError::Inconsistent(sq.im).into());
    }
    Ok(p.c / (6.0 * PI * PI) * sq.re)
}

/// Constants of the travelling-wave equations
/// `-vp + (3/2)p² - (c/12)p'' = A` and `-(v/2)p² + (1/2)p³ - (c/24)p'² - Ap = B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravellingConstants {
    pub a: f64,
    pub b: f64,
    pub v: f64,
    pub k: Option<f64>,
    pub cal_v: Option<f64>,
}

pub fn travelling_constants(p: &CnoidalParams) -> TravellingConstants {
    let wave = CnoidalWave::new(*p);
    let (m, vv) = (p.m, p.rescaled_v);
    let sigma = p.c * wave.k_m * wave.k_m / (PI * PI);
    let q = m * m - m + 1.0;
    let a = sigma * sigma / 6.0 * (-vv * vv / 4.0 + q / 9.0);
    let s = sigma / 3.0;
    let b = 0.5
        * s
        * s
        * s
        * (vv * vv * vv / 8.0 - q * vv / 6.0 + (2.0 * m * m * m - 3.0 * m * m - 3.0 * m + 2.0) / 27.0);
    let (k, cal_v) = if p.in_resonance_wedge() {
        (None, None)
    } else {
        (
            uniform_representative(p).ok(),
            crate::reconstruct::cal_v(p).ok(),
        )
    };
    TravellingConstants { a, b, v: wave.velocity, k, cal_v }
}

/// `S[f] = f'''/f' - (3/2)(f''/f')²`.
pub fn schwarzian(f: &CircleMap) -> Result<GridField> {
    let (d1, d2, d3) = f.derivatives();
    let min = d1.min();
    if min <= 0.0 {
        return Err(Error::NonMonotone(min));
    }
    let n = d1.n();
    let values = (0..n)
        .map(|j| {
            let (a, b, c) = (d1.values()[j], d2.values()[j], d3.values()[j]);
            c / a - 1.5 * (b / a) * (b / a)
        })
        .collect();
    GridField::new(values)
}

/// Profile acted on by a circle map: either grid samples or a constant.
#[derive(Debug, Clone)]
pub enum Profile {
    Constant(f64),
    Sampled(GridField),
}

/// `(f·p)(x) = [(f⁻¹)'(x)]² p(f⁻¹(x)) - (c/12) S[f⁻¹](x)`.
pub fn coadjoint_action(f: &CircleMap, profile: &Profile, c: f64) -> Result<GridField> {
    let inv = f.inverse()?;
    coadjoint_action_via_inverse(&inv, profile, c)
}

/// Same as [`coadjoint_action`] when `f⁻¹` is already at hand.
pub fn coadjoint_action_via_inverse(inv: &CircleMap, profile: &Profile, c: f64) -> Result<GridField> {
    let s = schwarzian(inv)?;
    let slope = inv.slope();
    let samples = inv.samples();
    let interp = match profile {
        Profile::Sampled(g) => Some(g.interpolant()),
        Profile::Constant(_) => None,
    };
    let values = (0..inv.n())
        .map(|j| {
            let at = match (&interp, profile) {
                (Some(it), _) => it.eval(samples[j]),
                (None, Profile::Constant(k)) => *k,
                _ => unreachable!(),
            };
            let d = slope.values()[j];
            d * d * at - c / 12.0 * s.values()[j]
        })
        .collect();
    GridField::new(values)
}
