//! Weierstrass ℘, ℘⁻¹ and ζ on real rectangular lattices.
//!
//! With roots `e1 > e2 > e3`, `λ² = e1 - e3` and `μ = (e2 - e3)/(e1 - e3)`,
//! the lattice functions are expressed through Jacobi functions of
//! parameter `μ`:
//!
//! ```text
//! ℘(u) = e3 + λ² / sn²(λu | μ)
//! ζ(u) = -e1 u + λ [ E(am(λu)|μ) + cn(λu) dn(λu) / sn(λu) ]
//! ```
//!
//! The half-periods are `ω1 = K(μ)/λ` (real) and `ω3 = K(1-μ)/λ`
//! (magnitude of the imaginary one).

use num_complex::Complex64;

use super::jacobi::{epsilon_complex, sn_cn_dn_complex};
use super::{carlson, complete_e, complete_k, incomplete_f, EllipticError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassLattice {
    pub omega1: f64,
    pub omega3: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    scale: f64,
    param: f64,
}

impl WeierstrassLattice {
    /// Lattice with roots `e1 = (2-m)/3`, `e2 = (2m-1)/3`, `e3 = -(m+1)/3`,
    /// half-periods `K(m)` and `i K(1-m)`. Requires `0 < m < 1`.
    pub fn cnoidal(m: f64) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(EllipticError::Parameter(m));
        }
        Self::from_roots((2.0 - m) / 3.0, (2.0 * m - 1.0) / 3.0, -(m + 1.0) / 3.0)
    }

    pub fn from_roots(e1: f64, e2: f64, e3: f64) -> Result<Self> {
        let spread = e1.abs().max(e2.abs()).max(e3.abs());
        if !(e1 > e2 && e2 > e3) || (e1 + e2 + e3).abs() > 1e-12 * spread.max(1.0) {
            return Err(EllipticError::Lattice);
        }
        let scale = (e1 - e3).sqrt();
        let param = (e2 - e3) / (e1 - e3);
        Ok(Self {
            omega1: complete_k(param)? / scale,
            omega3: complete_k(1.0 - param)? / scale,
            e1,
            e2,
            e3,
            scale,
            param,
        })
    }

    /// ζ(ω1).
    pub fn eta1(&self) -> f64 {
        let e = complete_e(self.param).expect("validated parameter");
        -self.e1 * self.omega1 + self.scale * e
    }

    /// ζ(iω3), purely imaginary.
    pub fn eta3(&self) -> Complex64 {
        let mc = 1.0 - self.param;
        let k = complete_k(mc).expect("validated parameter");
        let e = complete_e(mc).expect("validated parameter");
        Complex64::new(0.0, -self.e1 * self.omega3 + self.scale * (k - e))
    }
}

/// ℘(u) on the lattice.
pub fn weierstrass_p(u: Complex64, lat: &WeierstrassLattice) -> Result<Complex64> {
    let (sn, _, _) = sn_cn_dn_complex(u * lat.scale, lat.param)?;
    if sn.norm() == 0.0 {
        return Err(EllipticError::Pole);
    }
    Ok(lat.e3 + lat.scale * lat.scale / (sn * sn))
}

/// Preimage of a real value on the boundary of the fundamental rectangle.
///
/// | value range       | preimage                  |
/// |-------------------|---------------------------|
/// | `V >= e1`         | `(0, ω1]`                 |
/// | `e2 <= V < e1`    | `ω1 + i(0, ω3]`           |
/// | `e3 < V < e2`     | `iω3 + (0, ω1)`           |
/// | `V <= e3`         | `i(0, ω3]`                |
pub fn weierstrass_p_inverse(value: f64, lat: &WeierstrassLattice) -> Result<Complex64> {
    if !value.is_finite() {
        return Err(EllipticError::Domain(value, "p_inverse"));
    }
    let (e1, e2, e3) = (lat.e1, lat.e2, lat.e3);
    let mu = lat.param;
    let amp = |s2: f64| s2.clamp(0.0, 1.0).sqrt().asin();
    let u = if value >= e1 {
        Complex64::new(carlson::rf(value - e1, value - e2, value - e3), 0.0)
    } else if value >= e2 {
        let y = incomplete_f(amp((e1 - value) / (e1 - e2)), 1.0 - mu)? / lat.scale;
        Complex64::new(lat.omega1, y)
    } else if value > e3 {
        let x = incomplete_f(amp((value - e3) / (e2 - e3)), mu)? / lat.scale;
        Complex64::new(x, lat.omega3)
    } else {
        let y = incomplete_f(amp((e1 - e3) / (e1 - value)), 1.0 - mu)? / lat.scale;
        Complex64::new(0.0, y)
    };
    Ok(u)
}

/// ζ(u) for any `u` off the lattice.
pub fn weierstrass_zeta(u: Complex64, lat: &WeierstrassLattice) -> Result<Complex64> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(EllipticError::Domain(u.re, "zeta"));
    }
    let (w1, w3) = (lat.omega1, lat.omega3);
    let j = (u.re / (2.0 * w1)).round();
    let l = (u.im / (2.0 * w3)).round();
    let w = Complex64::new(u.re - 2.0 * j * w1, u.im - 2.0 * l * w3);
    let shift = 2.0 * j * lat.eta1() + 2.0 * l * lat.eta3();
    if w.norm() <= 1e-300 {
        return Err(EllipticError::Pole);
    }
    let reduced = if w.im < 0.0 {
        zeta_upper(w.conj(), lat)?.conj()
    } else {
        zeta_upper(w, lat)?
    };
    Ok(reduced + shift)
}

/// ζ on `|Re w| <= ω1`, `0 <= Im w <= ω3`, `w != 0`.
fn zeta_upper(w: Complex64, lat: &WeierstrassLattice) -> Result<Complex64> {
    let lam = lat.scale;
    let linear = -lat.e1 * w;
    if w.im <= 0.5 * lat.omega3 {
        let (sn, cn, dn) = sn_cn_dn_complex(w * lam, lat.param)?;
        if sn.norm() == 0.0 {
            return Err(EllipticError::Pole);
        }
        Ok(linear + lam * (epsilon_complex(w * lam, lat.param)? + cn * dn / sn))
    } else {
        // Shift by the imaginary quarter period: the cn·dn/sn pole at iK'
        // cancels against the jump of the epsilon function.
        let z = Complex64::new(w.re, w.im - lat.omega3) * lam;
        let mc = 1.0 - lat.param;
        let jump = complete_k(mc)? - complete_e(mc)?;
        Ok(linear + lam * (epsilon_complex(z, lat.param)? + Complex64::new(0.0, jump)))
    }
}
