use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use qndsim_core::cavity::{
    coupling_efficiency, finesse_from_reflectivity, intracavity_power, solve_mode, transverse_spectrum, Abcd, Axis,
    CavityGeometry,
};

/// Root of C q² + (D − A) q − B = 0 with Im q > 0, by complex Newton steps
/// from an arbitrary starting point.
fn newton_fixed_point(m: &Abcd, start: Complex64) -> Complex64 {
    let mut q = start;
    for _ in 0..200 {
        let f = q * q * m.c + q * (m.d - m.a) - m.b;
        let df = q * (2.0 * m.c) + (m.d - m.a);
        let step = f / df;
        q -= step;
        if step.norm() < 1e-16 * q.norm() {
            break;
        }
    }
    if q.im < 0.0 {
        q.conj()
    } else {
        q
    }
}

fn geometry(alpha: f64) -> CavityGeometry {
    CavityGeometry {
        astigmatism_correction: alpha,
        ..CavityGeometry::paper_1560()
    }
}

#[test]
fn waist_sweep_matches_fixed_point_oracle() {
    for i in 0..=40 {
        let alpha = 1.0 + 0.001 * i as f64;
        let geom = geometry(alpha);
        let mode = solve_mode(&geom).unwrap();
        for axis in Axis::BOTH {
            let m = geom.round_trip_matrix(axis);
            let q = newton_fixed_point(&m, Complex64::new(0.013, 0.007));
            assert_relative_eq!(m.apply(q).re, q.re, epsilon = 1e-12);
            let waist = (geom.wavelength * q.im / PI).sqrt();
            assert_relative_eq!(mode.axis(axis).waist, waist, max_relative = 1e-9);
            assert_relative_eq!(mode.axis(axis).rayleigh_range, q.im, max_relative = 1e-9);
        }
    }
}

/// Round-trip Gouy phase accumulated as atan(z/z_R) over every free-space
/// segment of the ring, starting at the crossing-arm centre.
fn accumulated_gouy(geom: &CavityGeometry, radius: f64, q0: Complex64) -> f64 {
    let mirror = Abcd::curved_mirror(radius);
    let segments = [
        0.5 * geom.crossing_arm_length,
        geom.side_length(),
        geom.crossing_arm_length,
        geom.side_length(),
        0.5 * geom.crossing_arm_length,
    ];
    let mut q = q0;
    let mut total = 0.0;
    for (i, &len) in segments.iter().enumerate() {
        let (z, zr) = (q.re, q.im);
        total += ((z + len) / zr).atan() - (z / zr).atan();
        q += len;
        if i + 1 < segments.len() {
            q = mirror.apply(q);
        }
    }
    total
}

#[test]
fn uncorrected_spacing_matches_direct_gouy_evaluation() {
    let geom = geometry(1.0);
    let mode = solve_mode(&geom).unwrap();
    let fsr = geom.free_spectral_range();
    for (axis, radius) in [
        (Axis::Parallel, geom.mirror_radius * geom.incidence_angle.cos()),
        (Axis::Perpendicular, geom.mirror_radius / geom.incidence_angle.cos()),
    ] {
        let m = geom.round_trip_matrix(axis);
        let q0 = newton_fixed_point(&m, Complex64::new(0.0, 0.02));
        let gouy = accumulated_gouy(&geom, radius, q0).rem_euclid(2.0 * PI);
        let raw = gouy / (2.0 * PI) * fsr;
        let spacing = raw.min(fsr - raw);
        assert_relative_eq!(mode.mode_spacing(axis), spacing, max_relative = 1e-9);
        // cos of the round-trip Gouy phase is the half trace
        assert_relative_eq!(gouy.cos(), m.half_trace(), epsilon = 1e-12);
    }
}

#[test]
fn correction_moves_only_the_horizontal_axis() {
    let plain = solve_mode(&geometry(1.0)).unwrap();
    let corrected = solve_mode(&geometry(1.02)).unwrap();
    assert_eq!(plain.perpendicular, corrected.perpendicular);
    assert!(plain.parallel.waist != corrected.parallel.waist);
}

#[test]
fn normal_incidence_spectrum_is_degenerate_in_m_plus_n() {
    let geom = CavityGeometry {
        incidence_angle: 0.0,
        ..geometry(1.0)
    };
    let spectrum = transverse_spectrum(&geom, 4, 4).unwrap();
    for a in &spectrum {
        for b in &spectrum {
            if a.m + a.n == b.m + b.n {
                assert_relative_eq!(a.offset_hz, b.offset_hz, epsilon = 1e-3);
            }
        }
    }
}

#[test]
fn resonator_arithmetic() {
    assert_relative_eq!(
        finesse_from_reflectivity(0.5).unwrap(),
        PI * 0.25 / (1.0 - 0.0625),
        max_relative = 1e-15
    );
    let per_output = intracavity_power(1e-3, 1788.0, 1.5).unwrap();
    assert_relative_eq!(per_output, 2.846, max_relative = 1e-3);
    assert_relative_eq!(200.0 / (per_output / 1e-3), 70.3e-3, max_relative = 1e-3);
    assert_relative_eq!(coupling_efficiency(3.0).unwrap(), 4.0 * 15.0 / 256.0, max_relative = 1e-15);
    assert_relative_eq!(coupling_efficiency(3.0).unwrap(), 0.234, max_relative = 2e-3);
}

proptest! {
    #[test]
    fn stable_modes_reproduce_themselves(
        alpha in 0.98f64..1.06,
        radius_mm in 80.0f64..140.0,
        arm_mm in 70.0f64..110.0,
    ) {
        let geom = CavityGeometry {
            astigmatism_correction: alpha,
            mirror_radius: radius_mm * 1e-3,
            crossing_arm_length: arm_mm * 1e-3,
            ..CavityGeometry::paper_1560()
        };
        if let Ok(mode) = solve_mode(&geom) {
            for axis in Axis::BOTH {
                let m = geom.round_trip_matrix(axis);
                let q = mode.axis(axis).q;
                let back = m.apply(q);
                prop_assert!((back - q).norm() <= 1e-9 * q.norm());
                prop_assert!(mode.axis(axis).waist > 0.0);
                prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
                let s = mode.mode_spacing(axis);
                prop_assert!(s >= 0.0 && s <= 0.5 * mode.free_spectral_range);
            }
        }
    }
}
