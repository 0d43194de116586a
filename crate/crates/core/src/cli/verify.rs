use crate::dynamics::{rotation_number, stroboscopic_map};
use crate::error::Result;
use crate::grid::TWO_PI;
use crate::phases::phase_decomposition_cnoidal;
use crate::reconstruct::{
    amenability_residual, cal_v, cal_v_quadrature, cubic_identity_residual, drift_velocity, UniformizingMap,
};
use crate::spectral::travelling_check;
use crate::waves::{coadjoint_action, uniform_representative, CnoidalParams, CnoidalWave, Profile};

use super::{Report, Settings, Suite};

/// 20 values of `m` in `[0.05, 0.95]`, each with 10 values of `V` below
/// the resonance wedge and 10 above it.
pub fn identity_grid() -> Vec<(f64, f64)> {
    let mut points = Vec::with_capacity(400);
    for i in 0..20 {
        let m = 0.05 + 0.9 * i as f64 / 19.0;
        let e2 = (2.0 * m - 1.0) / 3.0;
        let e3 = -(m + 1.0) / 3.0;
        for j in 0..10 {
            points.push((m, e3 - 0.1 - 0.2 * j as f64));
        }
        for j in 0..10 {
            points.push((m, e2 + 0.1 + 0.25 * j as f64));
        }
    }
    points
}

fn record(r: &mut Report, name: &str, worst: f64, limit: f64) {
    r.push(name, if worst < limit { "pass" } else { "fail" });
    r.push(format!("{name}_max"), worst);
}

fn identities(r: &mut Report, s: &Settings) -> Result<()> {
    let mut amen: f64 = 0.0;
    let mut cubic: f64 = 0.0;
    let mut sum: f64 = 0.0;
    let points = identity_grid();
    for &(m, v) in &points {
        let p = CnoidalParams::new(m, v, s.c)?;
        amen = amen.max(amenability_residual(&p)?);
        cubic = cubic.max(cubic_identity_residual(&p)?);
        let d = phase_decomposition_cnoidal(&p, &s.tolerances)?;
        sum = sum.max((d.sum() - d.v_drift).abs() / d.v_drift.abs().max(1.0));
    }
    r.push("identity_points", points.len() as i64);
    record(r, "amenability_identity", amen, 1e-8);
    record(r, "cubic_identity", cubic, 1e-8);
    record(r, "phase_sum", sum, 1e-9);
    Ok(())
}

fn oracles(r: &mut Report, s: &Settings) -> Result<()> {
    let c = s.c;
    let mut dual: f64 = 0.0;
    for &(m, v) in &[(0.9, 4.0 / 3.0), (0.9, 2.0 / 3.0), (0.5, 1.5)] {
        let p = CnoidalParams::new(m, v, c)?;
        let closed = drift_velocity(&p)?;
        let t = closed.period.unwrap_or(1.0);
        let map = stroboscopic_map(&CnoidalWave::new(p), t, s.strobe_n, &s.ode())?;
        let est = rotation_number(&map, &s.rotation())?;
        dual = dual.max((est.delta_phi / t - closed.v_drift).abs());
    }
    record(r, "drift_dual_method", dual, 1e-5);

    let p = CnoidalParams::new(0.9, 0.1, c)?;
    let w = CnoidalWave::new(p);
    let t = w.period().unwrap_or(1.0);
    let est = rotation_number(&stroboscopic_map(&w, t, s.strobe_n, &s.ode())?, &s.rotation())?;
    record(r, "wedge_locking", (est.delta_phi - TWO_PI * w.velocity.signum()).abs(), 1e-5);

    let mut quad: f64 = 0.0;
    for &(m, v) in &[(0.5, 1.0), (0.2, -1.0), (0.8, 3.0), (0.9, 2.0 / 3.0)] {
        let p = CnoidalParams::new(m, v, c)?;
        let w = CnoidalWave::new(p);
        let closed = cal_v(&p)?;
        let q = cal_v_quadrature(|x| w.profile(x, 0.0), w.velocity)?;
        quad = quad.max((q - closed).abs() / closed.abs().max(1.0));
    }
    record(r, "cal_v_quadrature", quad, 1e-9);

    let mut recon: f64 = 0.0;
    for &(m, v) in &[(0.9, 4.0 / 3.0), (0.5, 1.0), (0.3, -1.0)] {
        let p = CnoidalParams::new(m, v, c)?;
        let map = UniformizingMap::new(&p, 0.0)?;
        let k = uniform_representative(&p)?;
        let image = coadjoint_action(&map.forward_map(512)?, &Profile::Constant(k), c)?;
        recon = recon.max(image.sup_distance(&map.wave.sample(512, 0.0)?));
    }
    record(r, "coadjoint_reconstruction", recon, 1e-6);

    let check = travelling_check(&CnoidalParams::new(0.9, 4.0 / 3.0, c)?, s.spectral_n, s.steps_per_period, 1)?;
    record(r, "spectral_travelling", check.error, 1e-6);
    record(r, "spectral_mean", check.mean_drift, 1e-10);
    record(r, "spectral_energy", check.energy_drift, 1e-9);
    Ok(())
}

pub fn run_suite(suite: Suite, s: &Settings) -> Result<Report> {
    let mut r = Report::default();
    if matches!(suite, Suite::All | Suite::Identities) {
        identities(&mut r, s)?;
    }
    if matches!(suite, Suite::All | Suite::Oracles) {
        oracles(&mut r, s)?;
    }
    r.push("failures", r.failures() as i64);
    Ok(r)
}
