//! Dynamical, Berry and anomalous contributions to the drift.
//!
//! For any periodic reconstruction with uniform representative `k`,
//!
//! ```text
//! kΔφ = (T/2π)∫p² dx  -  ∮𝒜[f]  +  c·𝒞[g]
//! ```
//!
//! where `∮𝒜` is the Virasoro Berry phase of a path `f_t` with
//! `f_t·k = p(t)` and `𝒞` is the anomalous functional of the
//! reconstructed path `g_t`. For travelling waves the three terms reduce
//! to single integrals of the profile, and for cnoidal waves to complete
//! elliptic integrals.

use std::f64::consts::PI;

use crate::elliptic::complete_pi;
use crate::error::{Error, Result};
use crate::grid::{CircleMap, GridField, TWO_PI};
use crate::reconstruct::{drift_velocity, UniformizingMap};
use crate::waves::{uniform_representative, CnoidalParams, CnoidalWave, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub v_dynamical: f64,
    pub v_berry: f64,
    pub v_anomalous: f64,
    pub v_drift: f64,
    pub delta_phi: Option<f64>,
    pub period: Option<f64>,
    pub k: f64,
}

impl PhaseDecomposition {
    pub fn sum(&self) -> f64 {
        self.v_dynamical + self.v_berry + self.v_anomalous
    }
}

fn check_k(k: f64, c: f64, tol: &Tolerances) -> Result<()> {
    if !k.is_finite() || k.abs() < tol.eps_k * c.abs() {
        Err(Error::SingularK(k))
    } else {
        Ok(())
    }
}

/// Closed-form velocities of a cnoidal wave, with `σ = cK²/π²`:
///
/// ```text
/// v_dyn  = σ²/(18k) [V²/2 + V((4-2m)/3 - 2E/K) + 2(m²-m+1)/9]
/// v_ber  = v [1 - σ/(3k) (V/2 + (2-m)/3 - E/K)]
/// v_anom = σ²/(18k) [V² + V((2-m)/3 - E/K) - 2(m²-m+1)/9 - (V-e1)(V-e2) Π(n̂|m)/K]
/// ```
pub fn phase_decomposition_cnoidal(p: &CnoidalParams, tol: &Tolerances) -> Result<PhaseDecomposition> {
    let k = uniform_representative(p)?;
    check_k(k, p.c, tol)?;
    let wave = CnoidalWave::new(*p);
    let (m, vv) = (p.m, p.rescaled_v);
    let (e1, e2, e3) = p.roots();
    let ratio = wave.e_m / wave.k_m;
    let sigma = p.c * wave.k_m * wave.k_m / (PI * PI);
    let q = m * m - m + 1.0;
    let pref = sigma * sigma / (18.0 * k);
    let v_dynamical = pref * (vv * vv / 2.0 + vv * ((4.0 - 2.0 * m) / 3.0 - 2.0 * ratio) + 2.0 * q / 9.0);
    let v_berry = wave.velocity * (1.0 - sigma / (3.0 * k) * (vv / 2.0 + (2.0 - m) / 3.0 - ratio));
    // On either wedge boundary (V - e2)Π(n̂|m) -> 0.
    let d = vv - e3;
    let resonant = if d == 0.0 || m / d >= 1.0 {
        0.0
    } else {
        (vv - e1) * (vv - e2) * complete_pi(m / d, m)? / wave.k_m
    };
    let v_anomalous =
        pref * (vv * vv + vv * ((2.0 - m) / 3.0 - ratio) - 2.0 * q / 9.0 - resonant);
    let drift = drift_velocity(p)?;
    Ok(PhaseDecomposition {
        v_dynamical,
        v_berry,
        v_anomalous,
        v_drift: drift.v_drift,
        delta_phi: drift.delta_phi,
        period: drift.period,
        k,
    })
}

/// Travelling-wave decomposition from a sampled profile:
/// `v_dyn = (1/2πk)∫p²`, `v_ber = v - (v/2πk)∫p`, `v_anom = (c/48πk)∫p'²/(p-v)`.
pub fn phase_decomposition_generic(profile: &GridField, v: f64, c: f64, k: f64) -> Result<PhaseDecomposition> {
    if !k.is_finite() || k == 0.0 {
        return Err(Error::SingularK(k));
    }
    let shifted = profile.map(|p| p - v);
    if shifted.min() * shifted.max() <= 0.0 {
        return Err(Error::RootDetected);
    }
    let dp = profile.derivative(1);
    let v_dynamical = profile.map(|p| p * p).mean() / k;
    let v_berry = v - v * profile.mean() / k;
    let v_anomalous = c / (24.0 * k) * dp.zip_map(&shifted, |d, s| d * d / s).mean();
    let v_drift = v_dynamical + v_berry + v_anomalous;
    let period = (v != 0.0).then(|| TWO_PI / v.abs());
    Ok(PhaseDecomposition {
        v_dynamical,
        v_berry,
        v_anomalous,
        v_drift,
        delta_phi: period.map(|t| v_drift * t),
        period,
        k,
    })
}

/// A path of circle maps on a uniform time grid.
#[derive(Debug, Clone)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub maps: Vec<CircleMap>,
}

impl PathSample {
    pub fn new(times: Vec<f64>, maps: Vec<CircleMap>) -> Result<Self> {
        if times.len() != maps.len() || times.len() < 5 {
            return Err(Error::InvalidParams("a path needs at least 5 slices, one map per time".into()));
        }
        let dt = times[1] - times[0];
        if dt <= 0.0 || times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt) {
            return Err(Error::InvalidParams("path times must be uniform and increasing".into()));
        }
        if maps.iter().any(|f| f.n() != maps[0].n()) {
            return Err(Error::InvalidParams("path maps must share one grid".into()));
        }
        Ok(Self { times, maps })
    }

    fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// `f_t = g0 + vt` over `[0, T]`.
    pub fn travelling_boost(map: &UniformizingMap, slices: usize, n: usize) -> Result<Self> {
        let v = map.wave.velocity;
        let period = map.wave.period().ok_or(Error::InvalidParams("standing wave has no period".into()))?;
        let g0 = map.forward_map(n)?;
        let times: Vec<f64> = (0..=slices).map(|i| period * i as f64 / slices as f64).collect();
        let maps = times
            .iter()
            .map(|&t| CircleMap::from_displacement(g0.displacement().map(|d| d + v * t)))
            .collect();
        Self::new(times, maps)
    }

    /// Reconstructed path `g_t = g0 ∘ R_{𝒱t} + vt` over `[0, T]`.
    pub fn reconstruction(map: &UniformizingMap, slices: usize, n: usize) -> Result<Self> {
        let v = map.wave.velocity;
        let period = map.wave.period().ok_or(Error::InvalidParams("standing wave has no period".into()))?;
        let times: Vec<f64> = (0..=slices).map(|i| period * i as f64 / slices as f64).collect();
        let maps = times
            .iter()
            .map(|&t| {
                let disp = (0..n)
                    .map(|j| {
                        let y = TWO_PI * j as f64 / n as f64;
                        map.forward(y + map.cal_v * t).map(|x| x + v * t - y)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CircleMap::from_displacement(GridField::new(disp)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(times, maps)
    }
}

/// Fourth-order finite-difference time derivative of displacement grids.
fn time_derivatives(slices: &[Vec<f64>], dt: f64) -> Vec<Vec<f64>> {
    let m = slices.len();
    let n = slices[0].len();
    let stencil = |i: usize| -> (usize, [f64; 5]) {
        match i {
            0 => (0, [-25.0, 48.0, -36.0, 16.0, -3.0]),
            1 => (0, [-3.0, -10.0, 18.0, -6.0, 1.0]),
            _ if i + 2 >= m => {
                let base = m - 5;
                if i + 1 == m {
                    (base, [3.0, -16.0, 36.0, -48.0, 25.0])
                } else {
                    (base, [-1.0, 6.0, -18.0, 10.0, 3.0])
                }
            }
            _ => (i - 2, [1.0, -8.0, 0.0, 8.0, -1.0]),
        }
    };
    (0..m)
        .map(|i| {
            let (base, w) = stencil(i);
            (0..n)
                .map(|j| (0..5).map(|s| w[s] * slices[base + s][j]).sum::<f64>() / (12.0 * dt))
                .collect()
        })
        .collect()
}

/// Fourth-order quadrature on a uniform grid (composite Simpson, closing
/// with the 3/8 rule when the interval count is odd).
fn integrate_uniform(values: &[f64], dt: f64) -> f64 {
    let intervals = values.len() - 1;
    let simpson = |v: &[f64]| -> f64 {
        let mut s = v[0] + v[v.len() - 1];
        for (i, x) in v.iter().enumerate().take(v.len() - 1).skip(1) {
            s += if i % 2 == 1 { 4.0 * x } else { 2.0 * x };
        }
        s * dt / 3.0
    };
    if intervals.is_multiple_of(2) {
        simpson(values)
    } else {
        let split = intervals - 3;
        let tail = &values[split..];
        let three_eighths = 3.0 * dt / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3]);
        if split == 0 {
            three_eighths
        } else {
            simpson(&values[..=split]) + three_eighths
        }
    }
}

/// `∫ dt dx/2π (ḟ/f')[k + (c/24)(f''/f')'] - k f0⁻¹(f_T(0))`.
pub fn berry_phase_path(path: &PathSample, k: f64, c: f64) -> Result<f64> {
    for f in &path.maps {
        f.check_monotone()?;
    }
    let disps: Vec<Vec<f64>> = path.maps.iter().map(|f| f.displacement().values().to_vec()).collect();
    let fdot = time_derivatives(&disps, path.dt());
    let density = path
        .maps
        .iter()
        .zip(&fdot)
        .map(|(f, fd)| {
            let (d1, d2, _) = f.derivatives();
            let q = d2.zip_map(&d1, |a, b| a / b).derivative(1);
            let sum: f64 = (0..d1.n())
                .map(|j| fd[j] / d1.values()[j] * (k + c / 24.0 * q.values()[j]))
                .sum();
            sum / d1.n() as f64
        })
        .collect::<Vec<f64>>();
    let bulk = integrate_uniform(&density, path.dt());
    let first = &path.maps[0];
    let last = &path.maps[path.maps.len() - 1];
    let closure = first.inverse_at(last.eval(0.0))?;
    Ok(bulk - k * closure)
}

/// `-c ∫ dt dx/48π (∂_t g⁻¹/(g⁻¹)') ((g⁻¹)''/(g⁻¹)')'` over a reconstructed path.
pub fn anomalous_phase_path(recon: &PathSample, c: f64) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    let inverses = recon.maps.iter().map(|g| g.inverse()).collect::<Result<Vec<_>>>()?;
    let disps: Vec<Vec<f64>> = inverses.iter().map(|h| h.displacement().values().to_vec()).collect();
    let hdot = time_derivatives(&disps, recon.dt());
    let density = inverses
        .iter()
        .zip(&hdot)
        .map(|(h, hd)| {
            let (d1, d2, _) = h.derivatives();
            let q = d2.zip_map(&d1, |a, b| a / b).derivative(1);
            let sum: f64 = (0..d1.n()).map(|j| hd[j] / d1.values()[j] * q.values()[j]).sum();
            sum / d1.n() as f64
        })
        .collect::<Vec<f64>>();
    Ok(-c / 24.0 * integrate_uniform(&density, recon.dt()))
}

/// `(T/2π)∫p(x, 0)² dx`.
pub fn dynamical_phase(profile: &GridField, period: f64) -> f64 {
    period * profile.map(|p| p * p).mean()
}

/// `Δφ = (dynamical - berry + anomalous)/k`.
pub fn delta_phi_general(berry: f64, dynamical: f64, anomalous: f64, k: f64) -> Result<f64> {
    if !k.is_finite() || k == 0.0 {
        return Err(Error::SingularK(k));
    }
    Ok((dynamical - berry + anomalous) / k)
}

/// Berry phase of the travelling path `g0 + vt`: `sign(v)(∫p dx - 2πk)`.
pub fn berry_phase_travelling(profile: &GridField, v: f64, k: f64) -> f64 {
    v.signum() * (profile.integral() - TWO_PI * k)
}

/// Anomalous phase of a travelling reconstruction: `(cT/48π)∫p'²/(p-v) dx`.
pub fn anomalous_phase_travelling(profile: &GridField, v: f64, c: f64) -> Result<f64> {
    if v == 0.0 {
        return Err(Error::InvalidParams("standing wave has no period".into()));
    }
    let shifted = profile.map(|p| p - v);
    if shifted.min() * shifted.max() <= 0.0 {
        return Err(Error::RootDetected);
    }
    let dp = profile.derivative(1);
    let period = TWO_PI / v.abs();
    Ok(c * period / (48.0 * PI) * dp.zip_map(&shifted, |d, s| d * d / s).integral())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_generic_decomposition() {
        let p0 = 1.0 / 18.0;
        let g = GridField::constant(64, p0).unwrap();
        let d = phase_decomposition_generic(&g, 0.25, 1.0, p0).unwrap();
        assert!((d.v_dynamical - p0).abs() < 1e-15);
        assert!(d.v_berry.abs() < 1e-15);
        assert_eq!(d.v_anomalous, 0.0);
        assert!((d.v_drift - p0).abs() < 1e-15);
    }

    #[test]
    fn constant_profile_cnoidal_decomposition() {
        let p = CnoidalParams::new(0.0, 2.0, 1.0).unwrap();
        let d = phase_decomposition_cnoidal(&p, &Tolerances::default()).unwrap();
        assert!((d.v_dynamical - 1.0 / 18.0).abs() < 1e-14);
        assert!(d.v_berry.abs() < 1e-14);
        assert!(d.v_anomalous.abs() < 1e-14);
    }

    #[test]
    fn berry_velocity_vanishes_for_standing_wave() {
        for m in [0.4, 0.5] {
            let p = CnoidalParams::new(m, 0.0, 1.0).unwrap();
            let d = phase_decomposition_cnoidal(&p, &Tolerances::default()).unwrap();
            assert_eq!(d.v_berry, 0.0);
            assert!((d.sum() - d.v_drift).abs() < 1e-12, "m={m} sum={} drift={}", d.sum(), d.v_drift);
        }
    }

    #[test]
    fn static_path_has_no_holonomy() {
        let id = CircleMap::identity(64).unwrap();
        let path = PathSample::new((0..9).map(|i| i as f64 * 0.1).collect(), vec![id; 9]).unwrap();
        assert!(berry_phase_path(&path, 0.3, 1.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn rotation_path_has_no_anomaly() {
        let times: Vec<f64> = (0..17).map(|i| i as f64 * 0.05).collect();
        let maps = times.iter().map(|&t| CircleMap::rotation(64, 0.8 * t).unwrap()).collect();
        let path = PathSample::new(times, maps).unwrap();
        assert!(anomalous_phase_path(&path, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn uniform_quadrature_is_exact_for_cubics() {
        for len in [5usize, 6, 7, 8] {
            let dt = 0.25;
            let v: Vec<f64> = (0..len).map(|i| (i as f64 * dt).powi(3)).collect();
            let t = (len - 1) as f64 * dt;
            assert!((integrate_uniform(&v, dt) - t.powi(4) / 4.0).abs() < 1e-13, "len={len}");
        }
    }

    #[test]
    fn assembly_rejects_zero_k() {
        assert!(matches!(delta_phi_general(0.0, 0.0, 0.0, 0.0), Err(Error::SingularK(_))));
        assert_eq!(delta_phi_general(0.0, 0.0, 0.0, 1.0).unwrap(), 0.0);
    }
}
