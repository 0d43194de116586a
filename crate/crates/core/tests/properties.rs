use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kdv_drift::dynamics::{rotation_number, stroboscopic_map, CircleLift, OdeOptions, RotationOptions, StroboscopicMap};
use kdv_drift::grid::TWO_PI;
use kdv_drift::reconstruct::{drift_velocity, DriftRegime, UniformizingMap};
use kdv_drift::waves::{uniform_representative, CnoidalParams, CnoidalWave};

fn reference_map() -> StroboscopicMap {
    let w = CnoidalWave::new(CnoidalParams::new(0.9, 4.0 / 3.0, 1.0).unwrap());
    stroboscopic_map(&w, w.period().unwrap(), 256, &OdeOptions::default()).unwrap()
}

/// `h(x) = x + a sin(jx + b) / j` with `|a| < 1`, and its inverse by Newton.
#[derive(Clone, Copy)]
struct Conjugator {
    a: f64,
    b: f64,
    j: f64,
}

impl Conjugator {
    fn apply(&self, x: f64) -> f64 {
        x + self.a * (self.j * x + self.b).sin() / self.j
    }

    fn invert(&self, y: f64) -> f64 {
        let mut x = y;
        for _ in 0..100 {
            let step = (self.apply(x) - y) / (1.0 + self.a * (self.j * x + self.b).cos());
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        x
    }
}

#[test]
fn rotation_number_is_conjugation_invariant() {
    let f = reference_map();
    let opts = RotationOptions { max_iters: 1 << 16, ..Default::default() };
    let base = rotation_number(&f, &opts).unwrap().delta_phi;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let h = Conjugator {
            a: rng.gen_range(-0.8..0.8),
            b: rng.gen_range(0.0..TWO_PI),
            j: rng.gen_range(1..4) as f64,
        };
        let conj = |x: f64| h.apply(f.apply(h.invert(x)));
        let rho = rotation_number(&conj, &opts).unwrap().delta_phi;
        assert!((rho - base).abs() < 1e-8, "{rho} vs {base}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wedge_dichotomy(m in 0.01f64..0.99, v in -3.0f64..3.0) {
        let p = CnoidalParams::new(m, v, 1.0).unwrap();
        let d = drift_velocity(&p).unwrap();
        if p.in_resonance_wedge() {
            prop_assert_eq!(d.regime, DriftRegime::Locked);
            prop_assert_eq!(d.v_drift, d.velocity);
            prop_assert!(uniform_representative(&p).is_err());
        } else {
            prop_assert!(d.regime != DriftRegime::Locked);
            prop_assert!(uniform_representative(&p).unwrap().is_finite());
        }
    }

    #[test]
    fn k_increases_with_velocity(m in 0.01f64..0.99, a in 0.001f64..3.0, b in 0.001f64..3.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let e2 = (2.0 * m - 1.0) / 3.0;
        let e3 = -(m + 1.0) / 3.0;
        let k = |v: f64| uniform_representative(&CnoidalParams::new(m, v, 1.0).unwrap()).unwrap();
        prop_assert!(k(e2 + lo) < k(e2 + hi));
        prop_assert!(k(e3 - hi) < k(e3 - lo));
    }

    #[test]
    fn drift_is_independent_of_phase_offset(m in 0.0f64..0.99, v in -3.0f64..3.0, x0 in -10.0f64..10.0) {
        let a = drift_velocity(&CnoidalParams::new(m, v, 1.0).unwrap()).unwrap();
        let b = drift_velocity(&CnoidalParams::with_offset(m, v, 1.0, x0).unwrap()).unwrap();
        prop_assert_eq!(a.v_drift, b.v_drift);
        prop_assert_eq!(a.regime, b.regime);
    }

    #[test]
    fn uniformizing_phase_is_a_rotation(phi in -4.0f64..4.0, x in 0.0f64..6.3) {
        let p = CnoidalParams::new(0.7, 1.5, 1.0).unwrap();
        let g = UniformizingMap::new(&p, 0.0).unwrap();
        let h = UniformizingMap::new(&p, phi).unwrap();
        prop_assert!((h.inverse(x) - g.inverse(x) - phi).abs() < 1e-12);
        prop_assert!((h.forward(g.inverse(x) + phi).unwrap() - x).abs() < 1e-11);
    }

    #[test]
    fn drift_scales_with_central_charge(m in 0.0f64..0.99, v in -3.0f64..3.0, c in 0.1f64..5.0) {
        let a = drift_velocity(&CnoidalParams::new(m, v, 1.0).unwrap()).unwrap();
        let b = drift_velocity(&CnoidalParams::new(m, v, c).unwrap()).unwrap();
        prop_assert!((b.v_drift - c * a.v_drift).abs() < 1e-12 * (1.0 + (c * a.v_drift).abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn stroboscopic_map_is_equivariant(x in -20.0f64..20.0, turns in -3i32..3) {
        let f = reference_map();
        let shift = TWO_PI * turns as f64;
        prop_assert!((f.apply(x + shift) - f.apply(x) - shift).abs() < 1e-12);
    }
}
