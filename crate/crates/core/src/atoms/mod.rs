//! Collective-spin description of the clock ensemble.
//!
//! The two clock states |F=1,0⟩ and |F=2,0⟩ form a pseudo-spin with
//! J_z = (N_{F=2} − N_{F=1})/2. Atoms scattered out of the clock pair into
//! |F=2, m_F≠0⟩ are tracked as `leaked`; they no longer couple to the
//! microwave but still show up in the probe signal.

pub mod dynamics;
pub mod line;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dynamics::{
    beta_shift, damping_rate, evolve, rabi_frequency_pull, DampingRate, Drive, ProbeCoupling, RabiModel, StepError,
};
pub use line::{
    beam_intensity, light_shift, scattering_rate, ClockProbe, LightShift, ProbeTuning, ScatteringRate,
    DEFAULT_EXPANSION_RATE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomsError {
    #[error("{name} = {value} outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

impl AtomsError {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        AtomsError::Domain { name, value, expected }
    }
}

/// Relative slack allowed on the Bloch-ball and atom-count constraints.
pub const STATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleState {
    pub atom_number: f64,
    /// (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩).
    pub bloch: [f64; 3],
    /// Atoms remaining in the clock pair.
    pub clock_population: f64,
    /// Atoms in |F=2, m_F≠0⟩.
    pub leaked: f64,
    pub temperature: f64,
    pub cloud_rms: f64,
}

impl EnsembleState {
    /// All atoms in |F=1, m_F=0⟩.
    pub fn ground(atom_number: f64) -> Self {
        EnsembleState {
            atom_number,
            bloch: [0.0, 0.0, -0.5 * atom_number],
            clock_population: atom_number,
            leaked: 0.0,
            temperature: 80e-6,
            cloud_rms: 500e-6,
        }
    }

    pub fn with_cloud(mut self, temperature: f64, cloud_rms: f64) -> Self {
        self.temperature = temperature;
        self.cloud_rms = cloud_rms;
        self
    }

    pub fn bloch_length(&self) -> f64 {
        self.bloch.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn f2_population(&self) -> f64 {
        self.bloch[2] + 0.5 * self.clock_population
    }

    pub fn f1_population(&self) -> f64 {
        0.5 * self.clock_population - self.bloch[2]
    }

    /// Population seen by an F=2-sensitive probe.
    pub fn detected_population(&self) -> f64 {
        self.f2_population() + self.leaked
    }

    pub fn validate(&self) -> Result<(), StepError> {
        let scale = self.atom_number.max(1.0);
        let tol = STATE_TOLERANCE * scale;
        let finite = self.bloch.iter().all(|v| v.is_finite())
            && self.clock_population.is_finite()
            && self.leaked.is_finite()
            && self.atom_number.is_finite();
        if !finite {
            return Err(StepError::NonFinite);
        }
        if self.atom_number < 0.0 || self.leaked < -tol || self.clock_population < -tol {
            return Err(StepError::NegativePopulation);
        }
        if self.bloch_length() > 0.5 * self.clock_population + tol {
            return Err(StepError::OutsideBlochBall {
                length: self.bloch_length(),
                limit: 0.5 * self.clock_population,
            });
        }
        if (self.clock_population + self.leaked - self.atom_number).abs() > tol {
            return Err(StepError::AtomCount {
                accounted: self.clock_population + self.leaked,
                expected: self.atom_number,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl SpinAxis {
    fn index(self) -> usize {
        match self {
            SpinAxis::X => 0,
            SpinAxis::Y => 1,
            SpinAxis::Z => 2,
        }
    }
}

/// Mean and variance of the collective spin for a coherent spin state
/// polarized along `axis`.
pub fn css_moments(atom_number: f64, axis: SpinAxis) -> ([f64; 3], [f64; 3]) {
    let mut mean = [0.0; 3];
    let mut var = [0.25 * atom_number; 3];
    mean[axis.index()] = 0.5 * atom_number;
    var[axis.index()] = 0.0;
    (mean, var)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingEstimate {
    pub kappa_squared: f64,
    pub xi_squared: f64,
}

/// κ² = φ²·N_at·N_s/2 and the optimal squeezing ξ² = 1/(1 + κ²).
pub fn squeezing_estimate(
    phase_per_atom: f64,
    atom_number: f64,
    sideband_photons: f64,
) -> Result<SqueezingEstimate, AtomsError> {
    if !(atom_number >= 0.0) {
        return Err(AtomsError::domain("atom_number", atom_number, ">= 0"));
    }
    if !(sideband_photons >= 0.0) {
        return Err(AtomsError::domain("sideband_photons", sideband_photons, ">= 0"));
    }
    let kappa_squared = phase_per_atom * phase_per_atom * atom_number * sideband_photons / 2.0;
    Ok(SqueezingEstimate {
        kappa_squared,
        xi_squared: 1.0 / (1.0 + kappa_squared),
    })
}

/// Single-pass SNR scaled by √F for a resonator of finesse F.
pub fn cavity_enhancement(finesse: f64, snr_single_pass: f64) -> Result<f64, AtomsError> {
    if !(finesse >= 1.0) {
        return Err(AtomsError::domain("finesse", finesse, ">= 1"));
    }
    Ok(snr_single_pass * finesse.sqrt())
}
