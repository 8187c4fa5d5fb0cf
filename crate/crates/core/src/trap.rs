//! Crossed-cavity dipole potential at 1560 nm.
//!
//! Arm A runs along x, arm B along y, gravity along z. Each arm is an
//! astigmatic Gaussian beam with the in-plane waist horizontal and the
//! out-of-plane waist vertical. The ground-state potential is
//! U = −Re(α)·I/(2ε₀c).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::GaussianMode;
use crate::constants::{rb87, BOLTZMANN, PLANCK, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrapError {
    #[error("crossing is not a potential minimum (curvature {curvature:e} J/m² along axis {axis})")]
    NotAMinimum { axis: usize, curvature: f64 },
    #[error("{name} = {value} outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

fn domain(name: &'static str, value: f64, expected: &'static str) -> TrapError {
    TrapError::Domain {
        name,
        value,
        expected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleTrapConfig {
    pub power_per_arm: f64,
    /// Horizontal (in-plane) waist.
    pub waist_parallel: f64,
    /// Vertical waist.
    pub waist_perpendicular: f64,
    pub wavelength: f64,
    pub polarizability: f64,
    pub polarizability_ratio: f64,
    pub mass: f64,
    /// Standing-wave modulation depth from mirror back-scatter (0 = off).
    pub backscatter_depth: f64,
}

impl DipoleTrapConfig {
    /// 200 W per arm in the mode of the 1560 nm cavity.
    pub fn paper(mode: &GaussianMode) -> Self {
        DipoleTrapConfig {
            power_per_arm: 200.0,
            waist_parallel: mode.parallel.waist,
            waist_perpendicular: mode.perpendicular.waist,
            wavelength: 1560e-9,
            polarizability: rb87::POLARIZABILITY_1560,
            polarizability_ratio: rb87::POLARIZABILITY_RATIO_1560,
            mass: rb87::MASS,
            backscatter_depth: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), TrapError> {
        if !(self.power_per_arm >= 0.0) {
            return Err(domain("power_per_arm", self.power_per_arm, ">= 0"));
        }
        if !(self.waist_parallel > 0.0) {
            return Err(domain("waist_parallel", self.waist_parallel, "> 0"));
        }
        if !(self.waist_perpendicular > 0.0) {
            return Err(domain("waist_perpendicular", self.waist_perpendicular, "> 0"));
        }
        if !(self.wavelength > 0.0) {
            return Err(domain("wavelength", self.wavelength, "> 0"));
        }
        if !(self.polarizability_ratio > 1.0) {
            return Err(domain("polarizability_ratio", self.polarizability_ratio, "> 1"));
        }
        if !(self.mass > 0.0) {
            return Err(domain("mass", self.mass, "> 0"));
        }
        if !(0.0..1.0).contains(&self.backscatter_depth) {
            return Err(domain("backscatter_depth", self.backscatter_depth, "[0, 1)"));
        }
        Ok(())
    }

    pub fn rayleigh_parallel(&self) -> f64 {
        PI * self.waist_parallel.powi(2) / self.wavelength
    }

    pub fn rayleigh_perpendicular(&self) -> f64 {
        PI * self.waist_perpendicular.powi(2) / self.wavelength
    }

    /// Potential energy per unit intensity (J per W/m²), negative.
    pub fn energy_per_intensity(&self) -> f64 {
        -self.polarizability / (2.0 * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT)
    }

    /// Single-arm potential on its axis at the waist, without the standing
    /// wave factor.
    pub fn arm_peak_potential(&self) -> f64 {
        let peak_intensity = 2.0 * self.power_per_arm / (PI * self.waist_parallel * self.waist_perpendicular);
        self.energy_per_intensity() * peak_intensity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// Propagates along x.
    A,
    /// Propagates along y.
    B,
}

/// Potential of one arm at `(x, y, z)`.
pub fn arm_potential(config: &DipoleTrapConfig, arm: Arm, position: [f64; 3]) -> f64 {
    let [x, y, z] = position;
    let (axial, horizontal) = match arm {
        Arm::A => (x, y),
        Arm::B => (y, x),
    };
    let zh = config.rayleigh_parallel();
    let zv = config.rayleigh_perpendicular();
    let wh2 = config.waist_parallel.powi(2) * (1.0 + (axial / zh).powi(2));
    let wv2 = config.waist_perpendicular.powi(2) * (1.0 + (axial / zv).powi(2));
    let intensity = 2.0 * config.power_per_arm / (PI * (wh2 * wv2).sqrt())
        * (-2.0 * horizontal * horizontal / wh2 - 2.0 * z * z / wv2).exp();
    let k = 2.0 * PI / config.wavelength;
    let standing = 1.0 + config.backscatter_depth * (2.0 * k * axial).cos();
    config.energy_per_intensity() * intensity * standing
}

/// Total crossed-trap potential (J).
pub fn potential_at(config: &DipoleTrapConfig, position: [f64; 3]) -> f64 {
    arm_potential(config, Arm::A, position) + arm_potential(config, Arm::B, position)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapDepth {
    /// |U| at the crossing, both arms.
    pub crossing: f64,
    /// |U(crossing)| − |U(far out along one arm)|: the barrier for escape
    /// along an arm.
    pub relative_to_arm: f64,
}

impl TrapDepth {
    pub fn crossing_microkelvin(&self) -> f64 {
        self.crossing / BOLTZMANN * 1e6
    }

    pub fn relative_microkelvin(&self) -> f64 {
        self.relative_to_arm / BOLTZMANN * 1e6
    }
}

pub fn trap_depth(config: &DipoleTrapConfig) -> TrapDepth {
    let crossing = potential_at(config, [0.0; 3]).abs();
    // far along arm A: arm B contributes nothing, arm A sits near its waist
    // value (the Rayleigh ranges are much longer than the waists).
    let arm_alone = arm_potential(config, Arm::A, [0.0; 3]).abs();
    TrapDepth {
        crossing,
        relative_to_arm: crossing - arm_alone,
    }
}

/// Curvatures ∂²U/∂xᵢ² at the crossing (J/m²), analytic.
pub fn crossing_curvature(config: &DipoleTrapConfig) -> [f64; 3] {
    let depth = -config.arm_peak_potential();
    let m = config.backscatter_depth;
    let k = 2.0 * PI / config.wavelength;
    let zh = config.rayleigh_parallel();
    let zv = config.rayleigh_perpendicular();
    let axial = depth * ((1.0 + m) * (zh.powi(-2) + zv.powi(-2)) + 4.0 * k * k * m);
    let horizontal = depth * (1.0 + m) * 4.0 / config.waist_parallel.powi(2);
    let vertical = depth * (1.0 + m) * 4.0 / config.waist_perpendicular.powi(2);
    [axial + horizontal, horizontal + axial, 2.0 * vertical]
}

/// Harmonic trap frequencies ωᵢ/2π (Hz) at the crossing.
pub fn trap_frequencies(config: &DipoleTrapConfig) -> Result<[f64; 3], TrapError> {
    config.validate()?;
    let curvature = crossing_curvature(config);
    let mut out = [0.0; 3];
    for (axis, (&k, f)) in curvature.iter().zip(out.iter_mut()).enumerate() {
        if !(k > 0.0) {
            return Err(TrapError::NotAMinimum { axis, curvature: k });
        }
        *f = (k / config.mass).sqrt() / (2.0 * PI);
    }
    Ok(out)
}

/// Ground-level potential of the atom class brought into resonance by a
/// probe detuned by `detuning_hz`: h·δ/(ratio − 1).
pub fn detuning_to_potential(detuning_hz: f64, polarizability_ratio: f64) -> Result<f64, TrapError> {
    if !(polarizability_ratio > 1.0) {
        return Err(domain("polarizability_ratio", polarizability_ratio, "> 1"));
    }
    Ok(PLANCK * detuning_hz / (polarizability_ratio - 1.0))
}

pub fn potential_to_detuning(potential: f64, polarizability_ratio: f64) -> Result<f64, TrapError> {
    if !(polarizability_ratio > 1.0) {
        return Err(domain("polarizability_ratio", polarizability_ratio, "> 1"));
    }
    Ok(potential * (polarizability_ratio - 1.0) / PLANCK)
}

/// Transverse distance from a TEM₀₀ arm axis where the potential has fallen
/// to `level` (same sign and units as `peak`).
pub fn isopotential_radius(level: f64, peak: f64, waist: f64) -> Result<f64, TrapError> {
    let ratio = level / peak;
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(domain("level/peak", ratio, "(0, 1]"));
    }
    Ok(waist * (-ratio.ln() / 2.0).sqrt())
}

/// One-body loss: N₀·exp(−t/τ).
pub fn lifetime_decay(initial: f64, t: f64, tau: f64) -> Result<f64, TrapError> {
    if !(tau > 0.0) {
        return Err(domain("tau", tau, "> 0"));
    }
    Ok(initial * (-t / tau).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{solve_mode, CavityGeometry};
    use approx::assert_relative_eq;

    fn paper() -> DipoleTrapConfig {
        DipoleTrapConfig::paper(&solve_mode(&CavityGeometry::paper_1560()).unwrap())
    }

    fn central_second_difference(f: impl Fn(f64) -> f64, h: f64) -> f64 {
        (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h)
    }

    /// Richardson-extrapolated central difference, O(h⁴).
    fn second_derivative(f: impl Fn(f64) -> f64, h: f64) -> f64 {
        let coarse = central_second_difference(&f, h);
        let fine = central_second_difference(&f, h / 2.0);
        (4.0 * fine - coarse) / 3.0
    }

    #[test]
    fn depth_is_millikelvin_scale() {
        let depth = trap_depth(&paper());
        let crossing = depth.crossing_microkelvin() * 1e-3;
        let relative = depth.relative_microkelvin() * 1e-3;
        assert!(relative > 0.0);
        for mk in [crossing, relative] {
            assert!(mk > 1.4 / 1.5 && mk < 1.4 * 1.5, "{mk} mK");
        }
    }

    #[test]
    fn zero_power_is_flat() {
        let config = DipoleTrapConfig {
            power_per_arm: 0.0,
            ..paper()
        };
        for p in [[0.0; 3], [1e-4, -2e-5, 3e-5], [1e-2, 0.0, 0.0]] {
            assert_eq!(potential_at(&config, p), 0.0);
        }
        assert!(matches!(trap_frequencies(&config), Err(TrapError::NotAMinimum { .. })));
    }

    #[test]
    fn gaussian_edge_is_e_minus_two() {
        let config = paper();
        let axis = arm_potential(&config, Arm::B, [0.0; 3]);
        let edge = arm_potential(&config, Arm::B, [config.waist_parallel, 0.0, 0.0]);
        assert_relative_eq!(edge / axis, (-2.0f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn arms_are_symmetric() {
        let config = paper();
        for p in [[1e-5, 3e-5, 2e-6], [-4e-5, 1e-6, -7e-6]] {
            let swapped = [p[1], p[0], p[2]];
            assert_relative_eq!(potential_at(&config, p), potential_at(&config, swapped), max_relative = 1e-14);
        }
    }

    #[test]
    fn curvature_matches_finite_differences() {
        for backscatter in [0.0, 0.0436] {
            let config = DipoleTrapConfig {
                backscatter_depth: backscatter,
                ..paper()
            };
            let analytic = crossing_curvature(&config);
            // the lattice term needs a step well below λ/2
            let h = if backscatter > 0.0 { 1e-8 } else { 1e-6 };
            for axis in 0..3 {
                let numeric = second_derivative(
                    |s| {
                        let mut p = [0.0; 3];
                        p[axis] = s;
                        potential_at(&config, p)
                    },
                    h,
                );
                assert_relative_eq!(numeric, analytic[axis], max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn frequencies_near_kilohertz() {
        let [fx, fy, fz] = trap_frequencies(&paper()).unwrap();
        assert_eq!(fx, fy);
        assert!((fx / 1.2e3 - 1.0).abs() < 0.3, "fx = {fx}");
        assert!(fz > fx);
        // crossed beams give fz/fx = √2·w∥/w⊥ ≈ 1.01, not the quoted 1.6/1.2
        assert!(fz > 1.0e3 && fz < 1.6e3, "fz = {fz}");
    }

    #[test]
    fn frequencies_scale_with_sqrt_power() {
        let base = paper();
        let doubled = DipoleTrapConfig {
            power_per_arm: 2.0 * base.power_per_arm,
            ..base
        };
        let f1 = trap_frequencies(&base).unwrap();
        let f2 = trap_frequencies(&doubled).unwrap();
        for i in 0..3 {
            assert_relative_eq!(f2[i] / f1[i], 2f64.sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn tomography_detuning() {
        let u = 100e-6 * BOLTZMANN;
        let delta = potential_to_detuning(u, 47.7).unwrap();
        assert_relative_eq!(delta, 46.7 * BOLTZMANN * 100e-6 / PLANCK, max_relative = 1e-15);
        assert!((delta / 97.3e6 - 1.0).abs() < 1e-3);
        assert_eq!(detuning_to_potential(0.0, 47.7).unwrap(), 0.0);
        assert!(detuning_to_potential(1e6, 1.0).is_err());
        assert!(potential_to_detuning(1e-28, 0.5).is_err());
    }

    #[test]
    fn isopotential_inversion() {
        // TEM00 arm with a 98 µm waist; two probe detunings pick two
        // isopotentials whose radii follow the Gaussian profile.
        let waist = 98e-6;
        let peak = detuning_to_potential(120e6, 47.7).unwrap();
        let (d1, d2) = (90e6, 30e6);
        let r1 = isopotential_radius(detuning_to_potential(d1, 47.7).unwrap(), peak, waist).unwrap();
        let r2 = isopotential_radius(detuning_to_potential(d2, 47.7).unwrap(), peak, waist).unwrap();
        let expected = ((120.0f64 / 90.0).ln() / (120.0f64 / 30.0).ln()).sqrt();
        assert_relative_eq!(r1 / r2, expected, max_relative = 1e-14);
        // the profile evaluated at the inverted radius returns the level
        let level = peak * (-2.0 * r1 * r1 / (waist * waist)).exp();
        assert_relative_eq!(level, detuning_to_potential(d1, 47.7).unwrap(), max_relative = 1e-13);
        assert!(isopotential_radius(2.0 * peak, peak, waist).is_err());
    }

    #[test]
    fn lifetime() {
        assert_eq!(lifetime_decay(2e7, 0.0, 6.6).unwrap(), 2e7);
        assert_relative_eq!(lifetime_decay(2e7, 6.6, 6.6).unwrap(), 2e7 / std::f64::consts::E, max_relative = 1e-15);
        assert_relative_eq!(
            lifetime_decay(2e7, 13.2, 6.6).unwrap(),
            2e7 / std::f64::consts::E.powi(2),
            max_relative = 1e-14
        );
        assert!(lifetime_decay(1.0, 1.0, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn detuning_roundtrip(delta in -1e9f64..1e9, ratio in 1.01f64..100.0) {
            let u = detuning_to_potential(delta, ratio).unwrap();
            let back = potential_to_detuning(u, ratio).unwrap();
            proptest::prop_assert!((back - delta).abs() <= 1e-12 * delta.abs().max(1e-300));
        }
    }
}
