//! Folded four-mirror resonator: ABCD eigenmodes, transverse spectrum,
//! finesse and power build-up.
//!
//! The cavity is a bow-tie: four identical spherical mirrors at the corners of
//! a square, with the beam running along the two diagonals (the crossing arms,
//! where the atoms sit) and two sides. Off-axis incidence splits the mirror
//! focal power between the cavity plane and the orthogonal plane, so each
//! transverse axis is solved as an independent 1-D problem.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CavityError {
    #[error("cavity unstable on the {axis} axis (half-trace {half_trace:.6})")]
    UnstableCavity { axis: Axis, half_trace: f64 },
    #[error("{name} = {value} outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

fn domain(name: &'static str, value: f64, expected: &'static str) -> CavityError {
    CavityError::Domain {
        name,
        value,
        expected,
    }
}

/// Transverse axis of the astigmatic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// In the cavity plane (horizontal, tangential).
    Parallel,
    /// Orthogonal to the cavity plane (vertical, sagittal).
    Perpendicular,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::Parallel, Axis::Perpendicular];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Parallel => f.write_str("parallel"),
            Axis::Perpendicular => f.write_str("perpendicular"),
        }
    }
}

/// Paraxial ray-transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Abcd {
    pub const IDENTITY: Abcd = Abcd {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn propagation(length: f64) -> Self {
        Abcd {
            a: 1.0,
            b: length,
            c: 0.0,
            d: 1.0,
        }
    }

    /// Reflection off a mirror of effective radius `radius` (a thin lens of
    /// focal length radius/2). An infinite radius is a plane mirror.
    pub fn curved_mirror(radius: f64) -> Self {
        Abcd {
            a: 1.0,
            b: 0.0,
            c: -2.0 / radius,
            d: 1.0,
        }
    }

    pub fn half_trace(&self) -> f64 {
        0.5 * (self.a + self.d)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Transform a complex beam parameter: q' = (Aq + B)/(Cq + D).
    pub fn apply(&self, q: Complex64) -> Complex64 {
        (q * self.a + self.b) / (q * self.c + self.d)
    }
}

impl Mul for Abcd {
    type Output = Abcd;

    /// `self * rhs` applies `rhs` first.
    fn mul(self, rhs: Abcd) -> Abcd {
        Abcd {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    /// Optical round-trip length (sets the FSR).
    pub round_trip_length: f64,
    /// Length of each of the two crossing arms. The two remaining sides share
    /// the rest of the round trip equally. A value of a quarter of the round
    /// trip gives four equal segments.
    pub crossing_arm_length: f64,
    pub mirror_radius: f64,
    /// Angle of incidence on each mirror.
    pub incidence_angle: f64,
    /// Phenomenological factor on the in-plane effective radius.
    pub astigmatism_correction: f64,
    pub amplitude_reflectivity: f64,
    /// Mirror scattering loss in units of the mirror transmission.
    pub loss_factor: f64,
    pub wavelength: f64,
}

impl CavityGeometry {
    /// Measured free spectral range at 1560 nm.
    pub const PAPER_FSR_HZ: f64 = 976.2e6;

    /// The 1560 nm trapping configuration: R = 100 mm mirrors on a square of
    /// 90 mm diagonal, 22.5° incidence, α∥ = 1.020, r = 0.99956, x = 1.5.
    pub fn paper_1560() -> Self {
        CavityGeometry {
            round_trip_length: SPEED_OF_LIGHT / Self::PAPER_FSR_HZ,
            crossing_arm_length: 0.090,
            mirror_radius: 0.100,
            incidence_angle: PI / 8.0,
            astigmatism_correction: 1.020,
            amplitude_reflectivity: 0.99956,
            loss_factor: 1.5,
            wavelength: 1560e-9,
        }
    }

    pub fn side_length(&self) -> f64 {
        0.5 * (self.round_trip_length - 2.0 * self.crossing_arm_length)
    }

    pub fn free_spectral_range(&self) -> f64 {
        SPEED_OF_LIGHT / self.round_trip_length
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        if !(self.round_trip_length > 0.0) {
            return Err(domain("round_trip_length", self.round_trip_length, "> 0"));
        }
        if !(self.crossing_arm_length > 0.0 && 2.0 * self.crossing_arm_length < self.round_trip_length) {
            return Err(domain(
                "crossing_arm_length",
                self.crossing_arm_length,
                "0 < arm < round_trip/2",
            ));
        }
        if !(self.mirror_radius > 0.0) {
            return Err(domain("mirror_radius", self.mirror_radius, "> 0"));
        }
        if !(self.incidence_angle >= 0.0 && self.incidence_angle < PI / 2.0) {
            return Err(domain("incidence_angle", self.incidence_angle, "[0, π/2)"));
        }
        if !(self.astigmatism_correction > 0.0) {
            return Err(domain("astigmatism_correction", self.astigmatism_correction, "> 0"));
        }
        if !(self.amplitude_reflectivity > 0.0 && self.amplitude_reflectivity < 1.0) {
            return Err(domain("amplitude_reflectivity", self.amplitude_reflectivity, "(0, 1)"));
        }
        if !(self.loss_factor >= 0.0) {
            return Err(domain("loss_factor", self.loss_factor, ">= 0"));
        }
        if !(self.wavelength > 0.0) {
            return Err(domain("wavelength", self.wavelength, "> 0"));
        }
        Ok(())
    }

    /// R∥ = α∥·R·cosθ in the cavity plane, R⊥ = R/cosθ orthogonal to it.
    pub fn effective_radius(&self, axis: Axis) -> f64 {
        let cos = self.incidence_angle.cos();
        match axis {
            Axis::Parallel => self.astigmatism_correction * self.mirror_radius * cos,
            Axis::Perpendicular => self.mirror_radius / cos,
        }
    }

    /// Round-trip matrix referenced to the centre of a crossing arm.
    pub fn round_trip_matrix(&self, axis: Axis) -> Abcd {
        let mirror = Abcd::curved_mirror(self.effective_radius(axis));
        let half_arm = Abcd::propagation(0.5 * self.crossing_arm_length);
        let arm = Abcd::propagation(self.crossing_arm_length);
        let side = Abcd::propagation(self.side_length());
        half_arm * mirror * side * mirror * arm * mirror * side * mirror * half_arm
    }
}

/// Eigenmode of one transverse axis, referenced to the arm crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisMode {
    pub waist: f64,
    pub rayleigh_range: f64,
    /// Round-trip Gouy phase Arg(A + B/q), folded into [0, 2π).
    pub gouy_phase: f64,
    pub half_trace: f64,
    #[serde(skip)]
    pub q: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMode {
    pub parallel: AxisMode,
    pub perpendicular: AxisMode,
    pub free_spectral_range: f64,
    pub linewidth: f64,
    pub finesse: f64,
}

impl GaussianMode {
    pub fn axis(&self, axis: Axis) -> &AxisMode {
        match axis {
            Axis::Parallel => &self.parallel,
            Axis::Perpendicular => &self.perpendicular,
        }
    }

    /// Offset of the first transverse mode on `axis` from the closest
    /// fundamental, in [0, FSR/2].
    pub fn mode_spacing(&self, axis: Axis) -> f64 {
        let raw = self.axis(axis).gouy_phase / (2.0 * PI) * self.free_spectral_range;
        raw.min(self.free_spectral_range - raw)
    }
}

/// Self-consistent q of a round-trip matrix, with Im(q) > 0.
pub fn self_consistent_q(m: &Abcd) -> Option<Complex64> {
    let half_trace = m.half_trace();
    if !(half_trace.abs() < 1.0) || m.b == 0.0 {
        return None;
    }
    // 1/q = (D − A)/2B − i·sqrt(1 − m²)/|B|
    let inv_q = Complex64::new(
        (m.d - m.a) / (2.0 * m.b),
        -(1.0 - half_trace * half_trace).sqrt() / m.b.abs(),
    );
    Some(inv_q.inv())
}

fn solve_axis(geom: &CavityGeometry, axis: Axis) -> Result<AxisMode, CavityError> {
    let m = geom.round_trip_matrix(axis);
    let half_trace = m.half_trace();
    let q = self_consistent_q(&m).ok_or(CavityError::UnstableCavity { axis, half_trace })?;
    let rayleigh_range = q.im;
    let waist = (geom.wavelength * rayleigh_range / PI).sqrt();
    let gouy_phase = (Complex64::new(m.a, 0.0) + m.b / q).arg().rem_euclid(2.0 * PI);
    Ok(AxisMode {
        waist,
        rayleigh_range,
        gouy_phase,
        half_trace,
        q,
    })
}

/// Solve both transverse axes of the resonator.
pub fn solve_mode(geom: &CavityGeometry) -> Result<GaussianMode, CavityError> {
    geom.validate()?;
    let parallel = solve_axis(geom, Axis::Parallel)?;
    let perpendicular = solve_axis(geom, Axis::Perpendicular)?;
    let fsr = geom.free_spectral_range();
    let finesse = finesse_from_reflectivity(geom.amplitude_reflectivity)?;
    Ok(GaussianMode {
        parallel,
        perpendicular,
        free_spectral_range: fsr,
        linewidth: fsr / finesse,
        finesse,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransverseMode {
    pub m: u32,
    pub n: u32,
    /// Frequency above the nearest lower fundamental, in [0, FSR).
    pub offset_hz: f64,
}

/// TEM_mn frequency offsets relative to the fundamental comb.
pub fn transverse_spectrum(
    geom: &CavityGeometry,
    m_max: u32,
    n_max: u32,
) -> Result<Vec<TransverseMode>, CavityError> {
    let mode = solve_mode(geom)?;
    let fsr = mode.free_spectral_range;
    let mut out = Vec::with_capacity(((m_max + 1) * (n_max + 1)) as usize);
    for n in 0..=n_max {
        for m in 0..=m_max {
            let phase = m as f64 * mode.parallel.gouy_phase + n as f64 * mode.perpendicular.gouy_phase;
            let offset_hz = (phase / (2.0 * PI) * fsr).rem_euclid(fsr);
            out.push(TransverseMode { m, n, offset_hz });
        }
    }
    Ok(out)
}

/// F = πr²/(1 − r⁴) for four identical mirrors of amplitude reflectivity r.
pub fn finesse_from_reflectivity(r: f64) -> Result<f64, CavityError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain("amplitude_reflectivity", r, "(0, 1)"));
    }
    Ok(PI * r * r / (1.0 - r.powi(4)))
}

/// Intracavity power from the power leaking through one output mirror.
pub fn intracavity_power(output_power: f64, finesse: f64, loss_factor: f64) -> Result<f64, CavityError> {
    if !(output_power >= 0.0) {
        return Err(domain("output_power", output_power, ">= 0"));
    }
    if !(finesse >= 0.0) {
        return Err(domain("finesse", finesse, ">= 0"));
    }
    if !(loss_factor >= 0.0) {
        return Err(domain("loss_factor", loss_factor, ">= 0"));
    }
    Ok(2.0 * (1.0 + loss_factor) * finesse * output_power / PI)
}

/// Best-case input coupling with one input mirror against three output
/// mirrors and four lossy surfaces: 4·t²·ℓ/(t² + ℓ)² with ℓ = (3 + 4x)·t².
pub fn coupling_efficiency(loss_factor: f64) -> Result<f64, CavityError> {
    if !(loss_factor >= 0.0) {
        return Err(domain("loss_factor", loss_factor, ">= 0"));
    }
    let other = 3.0 + 4.0 * loss_factor;
    Ok(4.0 * other / (1.0 + other).powi(2))
}

/// Standing-wave modulation depth produced by a counter-propagating wave of
/// relative intensity `intensity_ratio`.
pub fn backscatter_modulation(intensity_ratio: f64) -> Result<f64, CavityError> {
    if !(0.0..1.0).contains(&intensity_ratio) {
        return Err(domain("intensity_ratio", intensity_ratio, "[0, 1)"));
    }
    Ok(intensity_ratio.sqrt())
}
