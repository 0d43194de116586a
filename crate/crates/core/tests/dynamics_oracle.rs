use kdv_drift::dynamics::{
    integrate_particle, rotation_number, stroboscopic_map, OdeOptions, RotationOptions,
};
use kdv_drift::grid::TWO_PI;
use kdv_drift::reconstruct::{drift_velocity, exact_trajectory, UniformizingMap};
use kdv_drift::waves::{CnoidalParams, CnoidalWave};

fn params(m: f64, v: f64) -> CnoidalParams {
    CnoidalParams::new(m, v, 1.0).unwrap()
}

fn numeric_delta_phi(p: &CnoidalParams) -> f64 {
    let w = CnoidalWave::new(*p);
    let period = w.period().unwrap();
    let map = stroboscopic_map(&w, period, 512, &OdeOptions::default()).unwrap();
    rotation_number(&map, &RotationOptions { tol: 1e-9, ..Default::default() }).unwrap().delta_phi
}

#[test]
fn rotation_number_matches_closed_form() {
    for &(m, v) in &[(0.9, 4.0 / 3.0), (0.9, 2.0 / 3.0)] {
        let p = params(m, v);
        let d = drift_velocity(&p).unwrap();
        let numeric = numeric_delta_phi(&p);
        assert!((numeric - d.delta_phi.unwrap()).abs() < 1e-6, "({m}, {v}): {numeric} vs {:?}", d.delta_phi);
    }
}

#[test]
fn wedge_locks_to_full_turn() {
    let dphi = numeric_delta_phi(&params(0.9, 0.1));
    assert!((dphi - TWO_PI).abs() < 1e-6, "{dphi}");
}

#[test]
fn stroboscopic_map_is_conjugate_to_rotation() {
    let p = params(0.9, 4.0 / 3.0);
    let w = CnoidalWave::new(p);
    let period = w.period().unwrap();
    let strobe = stroboscopic_map(&w, period, 512, &OdeOptions::default()).unwrap();
    let boost = UniformizingMap::new(&p, 0.0).unwrap();
    let dphi = drift_velocity(&p).unwrap().delta_phi.unwrap();
    let mut worst: f64 = 0.0;
    for (j, &f) in strobe.samples().iter().enumerate() {
        let x = TWO_PI * j as f64 / 512.0;
        let conj = boost.forward(boost.inverse(x) + dphi).unwrap();
        worst = worst.max((f - conj).abs());
    }
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn stroboscopic_map_is_equivariant() {
    let w = CnoidalWave::new(params(0.5, 1.0));
    let period = w.period().unwrap();
    let strobe = stroboscopic_map(&w, period, 64, &OdeOptions::default()).unwrap();
    let opts = OdeOptions::default();
    for &x in &[0.3, 2.2, 5.1] {
        let a = integrate_particle(&w, x, &[0.0, period], &opts).unwrap().positions[1];
        let b = integrate_particle(&w, x + TWO_PI, &[0.0, period], &opts).unwrap().positions[1];
        assert!((b - a - TWO_PI).abs() < 1e-9);
        assert!((strobe.eval(x + TWO_PI) - strobe.eval(x) - TWO_PI).abs() < 1e-12);
    }
}

#[test]
fn constant_profile_map_is_rotation() {
    let w = CnoidalWave::new(params(0.0, 2.0));
    let period = w.period().unwrap();
    let strobe = stroboscopic_map(&w, period, 32, &OdeOptions::default()).unwrap();
    for (j, &f) in strobe.samples().iter().enumerate() {
        let x = TWO_PI * j as f64 / 32.0;
        assert!((f - x - period / 18.0).abs() < 1e-11);
    }
}

#[test]
fn wedge_particle_settles_on_fixed_point() {
    let p = params(0.9, -1.0 / 3.0);
    let w = CnoidalWave::new(p);
    let period = w.period().unwrap();
    let t_end = 200.0 * period;
    let tr = integrate_particle(&w, 1.0, &[0.0, t_end], &OdeOptions::default()).unwrap();
    let x_end = tr.positions[1];
    assert!((w.profile(x_end, t_end) - w.velocity).abs() < 1e-8);
}

#[test]
fn halving_fixed_step_gains_fifth_order() {
    let p = params(0.9, 4.0 / 3.0);
    let w = CnoidalWave::new(p);
    let t_end = w.period().unwrap();
    let exact = exact_trajectory(&p, 0.4, &[0.0, t_end]).unwrap().positions[1];
    let err = |h: f64| {
        let o = OdeOptions { fixed_step: Some(h), ..Default::default() };
        (integrate_particle(&w, 0.4, &[0.0, t_end], &o).unwrap().positions[1] - exact).abs()
    };
    let h = t_end / 16.0;
    let (e1, e2) = (err(h), err(h / 2.0));
    assert!(e1 / e2 >= 8.0, "{e1:e} {e2:e}");
}
