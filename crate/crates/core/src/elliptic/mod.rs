//! Elliptic special functions in the parameter convention `m = k²`.
//!
//! Every integral is evaluated through the Carlson symmetric forms in
//! [`carlson`]. Incomplete integrals accept any real amplitude and are
//! continued by quasi-periodicity, e.g. `Π(n, φ+π|m) = Π(n, φ|m) + 2Π(n|m)`.

pub mod carlson;
pub mod jacobi;
pub mod weierstrass;

use std::f64::consts::PI;

use thiserror::Error;

pub use jacobi::{jacobi_am, jacobi_epsilon, jacobi_sn, sn_cn_dn, JacobiTriple};
pub use weierstrass::{weierstrass_p, weierstrass_p_inverse, weierstrass_zeta, WeierstrassLattice};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("parameter m = {0} outside [0, 1)")]
    Parameter(f64),
    #[error("characteristic n = {0} must be below 1")]
    Characteristic(f64),
    #[error("argument {0} outside the domain of {1}")]
    Domain(f64, &'static str),
    #[error("weierstrass zeta has a pole at the lattice point")]
    Pole,
    #[error("lattice roots must satisfy e1 > e2 > e3 and sum to zero")]
    Lattice,
    #[error("imaginary residual {0:e} exceeds tolerance")]
    Inconsistent(f64),
}

pub type Result<T> = std::result::Result<T, EllipticError>;

/// Validated elliptic parameter `m ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(EllipticError::Parameter(m))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary parameter `1 - m`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

pub(crate) fn check_m(m: f64) -> Result<()> {
    EllipticModulus::new(m).map(|_| ())
}

/// Complete integral of the first kind, `K(m) = R_F(0, 1-m, 1)`.
pub fn complete_k(m: f64) -> Result<f64> {
    check_m(m)?;
    Ok(carlson::rf(0.0, 1.0 - m, 1.0))
}

/// Complete integral of the second kind.
pub fn complete_e(m: f64) -> Result<f64> {
    check_m(m)?;
    let mc = 1.0 - m;
    Ok(carlson::rf(0.0, mc, 1.0) - m / 3.0 * carlson::rd(0.0, mc, 1.0))
}

/// Complete integral of the third kind,
/// `Π(n|m) = ∫₀^{π/2} dθ / [(1 - n sin²θ) √(1 - m sin²θ)]`.
pub fn complete_pi(n: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if n >= 1.0 || !n.is_finite() {
        return Err(EllipticError::Characteristic(n));
    }
    let mc = 1.0 - m;
    Ok(carlson::rf(0.0, mc, 1.0) + n / 3.0 * carlson::rj(0.0, mc, 1.0, 1.0 - n))
}

/// Splits `phi = j π + r` with `r ∈ [-π/2, π/2]`.
fn reduce_amplitude(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// Incomplete integral of the first kind `F(φ|m)` for any real `φ`.
pub fn incomplete_f(phi: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if !phi.is_finite() {
        return Err(EllipticError::Domain(phi, "F(phi|m)"));
    }
    let (j, r) = reduce_amplitude(phi);
    let (s, c) = r.sin_cos();
    let part = s * carlson::rf(c * c, 1.0 - m * s * s, 1.0);
    let periods = if j == 0.0 { 0.0 } else { 2.0 * j * complete_k(m)? };
    Ok(periods + part)
}

/// Incomplete integral of the second kind `E(φ|m)` for any real `φ`.
pub fn incomplete_e(phi: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if !phi.is_finite() {
        return Err(EllipticError::Domain(phi, "E(phi|m)"));
    }
    let (j, r) = reduce_amplitude(phi);
    let (s, c) = r.sin_cos();
    let (c2, d2) = (c * c, 1.0 - m * s * s);
    let part = s * carlson::rf(c2, d2, 1.0) - m / 3.0 * s * s * s * carlson::rd(c2, d2, 1.0);
    let periods = if j == 0.0 { 0.0 } else { 2.0 * j * complete_e(m)? };
    Ok(periods + part)
}

/// Incomplete integral of the third kind `Π(n, φ|m)` for any real `φ`.
pub fn incomplete_pi(n: f64, phi: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if n >= 1.0 || !n.is_finite() {
        return Err(EllipticError::Characteristic(n));
    }
    if !phi.is_finite() {
        return Err(EllipticError::Domain(phi, "Pi(n, phi|m)"));
    }
    let (j, r) = reduce_amplitude(phi);
    let (s, c) = r.sin_cos();
    let s2 = s * s;
    let (c2, d2) = (c * c, 1.0 - m * s2);
    let part = s * carlson::rf(c2, d2, 1.0)
        + n / 3.0 * s * s2 * carlson::rj(c2, d2, 1.0, 1.0 - n * s2);
    let periods = if j == 0.0 { 0.0 } else { 2.0 * j * complete_pi(n, m)? };
    Ok(periods + part)
}

/// Jacobi zeta function `Z(u|m) = E(am u|m) - (E/K) u`.
pub fn jacobi_zeta(u: f64, m: f64) -> Result<f64> {
    let ratio = complete_e(m)? / complete_k(m)?;
    Ok(jacobi_epsilon(u, m)? - ratio * u)
}
