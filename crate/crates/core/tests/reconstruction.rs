use kdv_drift::dynamics::{integrate_particle, OdeOptions};
use kdv_drift::grid::{CircleMap, TWO_PI};
use kdv_drift::reconstruct::{
    amenability_residual, cal_v, cal_v_quadrature, cubic_identity_residual, drift_velocity,
    exact_trajectory, UniformizingMap,
};
use kdv_drift::waves::{
    coadjoint_action, schwarzian, travelling_constants, uniform_representative, CnoidalParams,
    CnoidalWave, Profile,
};

fn params(m: f64, v: f64) -> CnoidalParams {
    CnoidalParams::new(m, v, 1.0).unwrap()
}

#[test]
fn amenability_identity_at_reference_point() {
    let p = params(0.9, 4.0 / 3.0);
    assert!(amenability_residual(&p).unwrap() < 1e-9);
    assert!(cubic_identity_residual(&p).unwrap() < 1e-8);
}

#[test]
fn identities_on_both_sides_of_wedge() {
    for &(m, v) in &[(0.3, -2.0), (0.7, -0.7), (0.5, 0.4), (0.9, 0.65), (0.2, 5.0), (0.95, 0.9)] {
        let p = params(m, v);
        let r1 = amenability_residual(&p).unwrap();
        let r2 = cubic_identity_residual(&p).unwrap();
        assert!(r1 < 1e-9 && r2 < 1e-8, "({m}, {v}): {r1:e} {r2:e}");
    }
}

#[test]
fn travelling_constants_solve_profile_equations() {
    let p = params(0.7, 1.2);
    let w = CnoidalWave::new(p);
    let tc = travelling_constants(&p);
    let n = 512;
    let g = w.sample(n, 0.0).unwrap();
    let d1 = g.derivative(1);
    let d2 = g.derivative(2);
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let (q, q1, q2) = (g.values()[j], d1.values()[j], d2.values()[j]);
        let r_a = -tc.v * q + 1.5 * q * q - q2 / 12.0 - tc.a;
        let r_b = -0.5 * tc.v * q * q + 0.5 * q * q * q - q1 * q1 / 24.0 - tc.a * q - tc.b;
        worst = worst.max(r_a.abs()).max(r_b.abs());
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn profile_mean_matches_quadrature() {
    let w = CnoidalWave::new(params(0.5, 1.0));
    let g = w.sample(256, 0.0).unwrap();
    assert!((g.mean() - w.mean()).abs() < 1e-13);
}

#[test]
fn boost_derivative_law() {
    let p = params(0.9, 4.0 / 3.0);
    let map = UniformizingMap::new(&p, 0.0).unwrap();
    let w = map.wave;
    let h = 1e-5;
    for j in 0..64 {
        let x = TWO_PI * j as f64 / 64.0;
        let fd = (map.inverse(x + h) - map.inverse(x - h)) / (2.0 * h);
        let law = map.cal_v / (w.profile(x, 0.0) - w.velocity);
        assert!((fd - law).abs() < 1e-6, "x={x}: {fd} vs {law}");
    }
}

#[test]
fn boost_maps_constant_to_profile() {
    for &(m, v) in &[(0.9, 4.0 / 3.0), (0.9, 2.0 / 3.0), (0.5, 1.0), (0.3, -1.0), (0.7, 3.0)] {
        let p = params(m, v);
        let map = UniformizingMap::new(&p, 0.0).unwrap();
        let k = uniform_representative(&p).unwrap();
        let g0 = map.forward_map(512).unwrap();
        let image = coadjoint_action(&g0, &Profile::Constant(k), p.c).unwrap();
        let target = map.wave.sample(512, 0.0).unwrap();
        let err = image.sup_distance(&target);
        assert!(err < 1e-6, "({m}, {v}): {err:e}");
    }
}

#[test]
fn schwarzian_matches_finite_differences() {
    let map = UniformizingMap::new(&params(0.9, 4.0 / 3.0), 0.0).unwrap();
    let g0 = map.forward_map(512).unwrap();
    let s = schwarzian(&g0).unwrap();
    let h = 1e-3;
    let f = |x: f64| map.forward(x).unwrap();
    for j in (0..512).step_by(37) {
        let x = TWO_PI * j as f64 / 512.0;
        let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
        let d1 = (fp1 - fm1) / (2.0 * h);
        let d2 = (fp1 - 2.0 * f0 + fm1) / (h * h);
        let d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
        let fd = d3 / d1 - 1.5 * (d2 / d1).powi(2);
        assert!((fd - s.values()[j]).abs() < 1e-5 * (1.0 + fd.abs()), "x={x}: {fd} vs {}", s.values()[j]);
    }
}

#[test]
fn composition_law_of_coadjoint_action() {
    let n = 256;
    let f = CircleMap::from_fn(n, |x| x + 0.2 * x.sin()).unwrap();
    let g = CircleMap::from_fn(n, |x| x + 0.1 * (2.0 * x).cos() + 0.3).unwrap();
    let p = Profile::Sampled(CnoidalWave::new(params(0.5, 1.0)).sample(n, 0.0).unwrap());
    let once = coadjoint_action(&f.compose(&g), &p, 1.0).unwrap();
    let inner = coadjoint_action(&g, &p, 1.0).unwrap();
    let twice = coadjoint_action(&f, &Profile::Sampled(inner), 1.0).unwrap();
    assert!(once.sup_distance(&twice) < 1e-6);
}

#[test]
fn quadrature_and_closed_form_agree_off_reference() {
    for &(m, v) in &[(0.5, 1.0), (0.2, -1.0), (0.8, 3.0), (0.9, 2.0 / 3.0)] {
        let p = params(m, v);
        let w = CnoidalWave::new(p);
        let q = cal_v_quadrature(|x| w.profile(x, 0.0), w.velocity).unwrap();
        let c = cal_v(&p).unwrap();
        assert!((q - c).abs() < 1e-9 * c.abs().max(1.0), "({m}, {v}): {q} vs {c}");
    }
}

#[test]
fn exact_trajectory_matches_ode() {
    let p = params(0.9, 4.0 / 3.0);
    let w = CnoidalWave::new(p);
    let period = w.period().unwrap();
    let times: Vec<f64> = (0..=200).map(|i| 20.0 * period * i as f64 / 200.0).collect();
    let exact = exact_trajectory(&p, 0.7, &times).unwrap();
    let ode = integrate_particle(&w, 0.7, &times, &OdeOptions::default()).unwrap();
    let err = exact.sup_distance(&ode);
    assert!(err < 1e-6, "{err:e}");
    assert_eq!(exact.positions[0], 0.7);
}

#[test]
fn constant_profile_trajectory() {
    let p = params(0.0, 2.0);
    let tr = exact_trajectory(&p, 0.2, &[0.0, 1.0, 10.0]).unwrap();
    assert!((tr.positions[2] - (0.2 + 10.0 / 18.0)).abs() < 1e-13);
}

#[test]
fn drift_approaches_wave_speed_at_boundary() {
    let m = 0.9;
    let e2 = (2.0 * m - 1.0) / 3.0;
    let mut prev = f64::INFINITY;
    for &d in &[1e-2, 1e-3, 1e-4, 1e-5] {
        let r = drift_velocity(&params(m, e2 + d)).unwrap();
        let gap = (r.v_drift - r.velocity).abs();
        assert!(gap < prev);
        prev = gap;
    }
}

#[test]
fn asymptotic_drift_is_a_third_of_wave_speed() {
    for &m in &[0.1, 0.5, 0.9] {
        for &v in &[-50.0, 50.0] {
            let r = drift_velocity(&params(m, v)).unwrap();
            let ratio = r.v_drift / r.velocity;
            assert!((0.317..=0.350).contains(&ratio), "({m}, {v}): {ratio}");
        }
    }
}

#[test]
fn phase_offset_is_a_gauge() {
    let a = drift_velocity(&params(0.9, 4.0 / 3.0)).unwrap();
    let b = drift_velocity(&CnoidalParams::with_offset(0.9, 4.0 / 3.0, 1.0, 1.3).unwrap()).unwrap();
    assert_eq!(a.v_drift, b.v_drift);
    let m0 = UniformizingMap::new(&params(0.9, 4.0 / 3.0), 0.0).unwrap();
    let m1 = UniformizingMap::new(&params(0.9, 4.0 / 3.0), 0.8).unwrap();
    for &x in &[0.1, 2.0, 5.5] {
        assert!((m1.inverse(x) - m0.inverse(x) - 0.8).abs() < 1e-13);
    }
}
