//! Carlson symmetric elliptic integrals.
//!
//! All three integrals use the duplication theorem followed by a short
//! Taylor expansion around the common mean (Carlson, Numer. Algorithms 10,
//! 1995). Arguments are real; `rj` additionally requires `p > 0`, which is
//! the only case reached by the third-kind integrals with characteristic
//! `n < 1`.

/// Relative truncation threshold for the duplication loop.
const DUPLICATION_TOL: f64 = 1e-17;
const MAX_DUPLICATIONS: usize = 200;

/// R_F(x, y, z) for nonnegative arguments, at most one of them zero.
pub fn rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * DUPLICATION_TOL).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        if scale * q <= a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xd = (a0 - x0) * scale / a;
    let yd = (a0 - y0) * scale / a;
    let zd = -(xd + yd);
    let e2 = xd * yd - zd * zd;
    let e3 = xd * yd * zd;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// R_C(x, y) for `x >= 0`, `y > 0`.
pub fn rc(x: f64, y: f64) -> f64 {
    debug_assert!(x >= 0.0 && y > 0.0);
    if x == y {
        return 1.0 / x.sqrt();
    }
    if x < y {
        (x / y).sqrt().acos() / (y - x).sqrt()
    } else {
        (x / y).sqrt().acosh() / (x - y).sqrt()
    }
}

/// R_C(1, 1 + e) with a series near `e = 0`, where the closed forms cancel.
fn rc_one(e: f64) -> f64 {
    if e.abs() < 1e-4 {
        // 1 - e/3 + e^2/5 - e^3/7 + e^4/9
        1.0 + e * (-1.0 / 3.0 + e * (1.0 / 5.0 + e * (-1.0 / 7.0 + e / 9.0)))
    } else if e > 0.0 {
        let s = e.sqrt();
        s.atan() / s
    } else {
        let s = (-e).sqrt();
        s.atanh() / s
    }
}

/// R_D(x, y, z) = R_J(x, y, z, z); `z > 0`, at most one of `x`, `y` zero.
pub fn rd(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z > 0.0);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * DUPLICATION_TOL).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if scale * q <= a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xd = (a0 - x0) * scale / a;
    let yd = (a0 - y0) * scale / a;
    let zd = -(xd + yd) / 3.0;
    let e2 = xd * yd - 6.0 * zd * zd;
    let e3 = (3.0 * xd * yd - 8.0 * zd * zd) * zd;
    let e4 = 3.0 * (xd * yd - zd * zd) * zd * zd;
    let e5 = xd * yd * zd * zd * zd;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * series / (a * a.sqrt()) + 3.0 * sum
}

/// R_J(x, y, z, p) for nonnegative `x, y, z` (at most one zero) and `p > 0`.
pub fn rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0 && p > 0.0);
    let (x0, y0, z0) = (x, y, z);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * DUPLICATION_TOL).powf(-1.0 / 6.0)
        * (a0 - x)
            .abs()
            .max((a0 - y).abs())
            .max((a0 - z).abs())
            .max((a0 - p).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if scale * q <= a.abs() {
            break;
        }
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = scale * scale * scale * delta / (d * d);
        sum += scale * rc_one(e) / d;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xd = (a0 - x0) * scale / a;
    let yd = (a0 - y0) * scale / a;
    let zd = (a0 - z0) * scale / a;
    let pd = -(xd + yd + zd) / 2.0;
    let e2 = xd * yd + xd * zd + yd * zd - 3.0 * pd * pd;
    let e3 = xd * yd * zd + 2.0 * e2 * pd + 4.0 * pd * pd * pd;
    let e4 = (2.0 * xd * yd * zd + e2 * pd + 3.0 * pd * pd * pd) * pd;
    let e5 = xd * yd * zd * pd * pd;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * series / (a * a.sqrt()) + 6.0 * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Reference values from Carlson (1995), table of test values.
    #[test]
    fn carlson_reference_values() {
        assert!((rf(1.0, 2.0, 0.0) - 1.311_028_777_146_059_9).abs() < 1e-15);
        assert!((rf(2.0, 3.0, 4.0) - 0.584_082_841_677_151_7).abs() < 1e-15);
        assert!((rc(0.0, 0.25) - PI).abs() < 1e-14);
        assert!((rc(2.25, 2.0) - 2.0f64.ln()).abs() < 1e-14);
        assert!((rd(0.0, 2.0, 1.0) - 1.797_210_352_103_388_3).abs() < 1e-14);
        assert!((rd(2.0, 3.0, 4.0) - 0.165_105_272_942_610_5).abs() < 1e-15);
        assert!((rj(0.0, 1.0, 2.0, 3.0) - 0.776_886_237_785_823_3).abs() < 1e-15);
        assert!((rj(2.0, 3.0, 4.0, 5.0) - 0.142_975_796_671_567_6).abs() < 1e-15);
    }

    #[test]
    fn rj_with_equal_last_arguments_is_rd() {
        for &(x, y, z) in &[(0.3, 1.2, 2.0), (0.0, 0.5, 1.0), (4.0, 1.0, 0.1)] {
            let a = rj(x, y, z, z);
            let b = rd(x, y, z);
            assert!((a - b).abs() < 1e-14 * b.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn rc_one_series_matches_closed_form_at_switch() {
        for &e in &[9.9e-5f64, -9.9e-5, 1.01e-4, -1.01e-4] {
            let closed = if e > 0.0 {
                e.sqrt().atan() / e.sqrt()
            } else {
                (-e).sqrt().atanh() / (-e).sqrt()
            };
            assert!((rc_one(e) - closed).abs() < 1e-15);
        }
    }
}
