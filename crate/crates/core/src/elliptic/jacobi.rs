//! Jacobi amplitude and the sn/cn/dn triple, real and complex.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_m, complete_k, incomplete_e, Result};

const AGM_MAX_STEPS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Amplitude for `|u| <= K(m)` by the descending Landen (AGM) scheme.
fn am_reduced(u: f64, m: f64) -> f64 {
    if m == 0.0 {
        return u;
    }
    let mut a = [0.0; AGM_MAX_STEPS + 1];
    let mut c = [0.0; AGM_MAX_STEPS + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = (1.0 - m).sqrt();
    let mut steps = 0;
    while steps < AGM_MAX_STEPS && c[steps].abs() > 1e-16 * a[steps] {
        let (an, bn) = (a[steps], b);
        a[steps + 1] = 0.5 * (an + bn);
        c[steps + 1] = 0.5 * (an - bn);
        b = (an * bn).sqrt();
        steps += 1;
    }
    let mut phi = 2f64.powi(steps as i32) * a[steps] * u;
    for n in (1..=steps).rev() {
        phi = 0.5 * (phi + (c[n] / a[n] * phi.sin()).asin());
    }
    phi
}

/// Continuous Jacobi amplitude: `am(u + 2K|m) = am(u|m) + π`.
pub fn jacobi_am(u: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if m == 0.0 {
        return Ok(u);
    }
    let k = complete_k(m)?;
    let turns = (u / (2.0 * k)).round();
    let r = u - turns * 2.0 * k;
    Ok(turns * PI + am_reduced(r, m))
}

pub fn sn_cn_dn(u: f64, m: f64) -> Result<JacobiTriple> {
    let phi = jacobi_am(u, m)?;
    let (sn, cn) = phi.sin_cos();
    Ok(JacobiTriple { sn, cn, dn: (1.0 - m * sn * sn).sqrt() })
}

pub fn jacobi_sn(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_am(u, m)?.sin())
}

/// Jacobi epsilon function `E(am u|m)`, continuous in `u`.
pub fn jacobi_epsilon(u: f64, m: f64) -> Result<f64> {
    incomplete_e(jacobi_am(u, m)?, m)
}

/// sn, cn, dn at complex argument `a + ib` via the addition theorem with
/// the imaginary transformation applied to the `b` part.
pub(crate) fn sn_cn_dn_complex(z: Complex64, m: f64) -> Result<(Complex64, Complex64, Complex64)> {
    let mc = 1.0 - m;
    let JacobiTriple { sn: s, cn: c, dn: d } = sn_cn_dn(z.re, m)?;
    let JacobiTriple { sn: s1, cn: c1, dn: d1 } = sn_cn_dn(z.im, mc)?;
    let delta = c1 * c1 + m * s * s * s1 * s1;
    let sn = Complex64::new(s * d1, c * d * s1 * c1) / delta;
    let cn = Complex64::new(c * c1, -s * d * s1 * d1) / delta;
    let dn = Complex64::new(d * c1 * d1, -m * s * c * s1) / delta;
    Ok((sn, cn, dn))
}

/// Epsilon function at complex argument. Valid while `|Im z|` stays below
/// `K(1-m)` (the nearest pole of sn off the real axis).
pub(crate) fn epsilon_complex(z: Complex64, m: f64) -> Result<Complex64> {
    let eps_re = jacobi_epsilon(z.re, m)?;
    if z.im == 0.0 {
        return Ok(Complex64::new(eps_re, 0.0));
    }
    let mc = 1.0 - m;
    // E(am(ib)|m) = i [b + dn(b|m') sc(b|m') - E(am(b|m')|m')]
    let JacobiTriple { sn: s1, cn: c1, dn: d1 } = sn_cn_dn(z.im, mc)?;
    let eps_im = Complex64::new(0.0, z.im + d1 * s1 / c1 - jacobi_epsilon(z.im, mc)?);
    let sn_a = jacobi_sn(z.re, m)?;
    let sn_ib = Complex64::new(0.0, s1 / c1);
    let (sn_z, _, _) = sn_cn_dn_complex(z, m)?;
    Ok(eps_re + eps_im - m * sn_a * sn_ib * sn_z)
}
