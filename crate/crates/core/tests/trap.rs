use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use qndsim_core::cavity::{backscatter_modulation, solve_mode};
use qndsim_core::trap::{potential_at, trap_depth, trap_frequencies, DipoleTrapConfig};
use qndsim_core::CavityGeometry;

fn paper() -> DipoleTrapConfig {
    DipoleTrapConfig::paper(&solve_mode(&CavityGeometry::paper_1560()).unwrap())
}

/// Second derivative along `axis` by Richardson-extrapolated central
/// differences.
fn curvature_fd(cfg: &DipoleTrapConfig, axis: usize, h: f64) -> f64 {
    let d2 = |h: f64| {
        let mut p = [0.0; 3];
        p[axis] = h;
        let plus = potential_at(cfg, p);
        p[axis] = -h;
        let minus = potential_at(cfg, p);
        (plus - 2.0 * potential_at(cfg, [0.0; 3]) + minus) / (h * h)
    };
    (4.0 * d2(0.5 * h) - d2(h)) / 3.0
}

#[test]
fn frequencies_match_numerical_curvature() {
    for backscatter in [0.0, 1.9e-3] {
        let cfg = DipoleTrapConfig {
            backscatter_depth: backscatter_modulation(backscatter).unwrap(),
            ..paper()
        };
        let freqs = trap_frequencies(&cfg).unwrap();
        // the standing wave needs a step well below λ/2
        let step = if backscatter > 0.0 { 20e-9 } else { 1e-6 };
        for axis in 0..3 {
            let k = curvature_fd(&cfg, axis, step);
            let f = (k / cfg.mass).sqrt() / (2.0 * PI);
            assert_relative_eq!(freqs[axis], f, max_relative = 1e-5);
        }
    }
}

#[test]
fn crossing_doubles_the_single_arm_depth() {
    let d = trap_depth(&paper());
    assert_relative_eq!(d.relative_to_arm, 0.5 * d.crossing, max_relative = 1e-12);
    assert!(d.crossing_microkelvin() > 1500.0 && d.crossing_microkelvin() < 2500.0);
}

#[test]
fn frequencies_scale_with_mass() {
    let cfg = paper();
    let heavy = DipoleTrapConfig {
        mass: 4.0 * cfg.mass,
        ..cfg
    };
    let (a, b) = (trap_frequencies(&cfg).unwrap(), trap_frequencies(&heavy).unwrap());
    for i in 0..3 {
        assert_relative_eq!(a[i], 2.0 * b[i], max_relative = 1e-12);
    }
}

proptest! {
    #[test]
    fn potential_has_the_trap_symmetries(
        x in -300e-6f64..300e-6,
        y in -300e-6f64..300e-6,
        z in -300e-6f64..300e-6,
    ) {
        let cfg = paper();
        let u = potential_at(&cfg, [x, y, z]);
        prop_assert!(u <= 0.0);
        prop_assert!(u >= potential_at(&cfg, [0.0; 3]));
        for p in [[-x, y, z], [x, y, -z], [y, x, z]] {
            let v = potential_at(&cfg, p);
            prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-40));
        }
    }

    #[test]
    fn potential_is_linear_in_power(scale in 0.01f64..5.0, x in -100e-6f64..100e-6) {
        let cfg = paper();
        let scaled = DipoleTrapConfig { power_per_arm: cfg.power_per_arm * scale, ..cfg };
        let p = [x, 0.5 * x, 0.0];
        let (a, b) = (potential_at(&cfg, p), potential_at(&scaled, p));
        prop_assert!((b - scale * a).abs() <= 1e-12 * (scale * a).abs());
    }
}
