//! Driven, damped and probed Bloch-vector dynamics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::line::ClockProbe;
use super::{AtomsError, EnsembleState};
use crate::constants::HBAR;

/// Largest rotation or loss exponent per substep when probe dissipation is
/// split from the rotation.
const MAX_SUBSTEP_ANGLE: f64 = 0.02;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("non-finite state after step")]
    NonFinite,
    #[error("negative population after step")]
    NegativePopulation,
    #[error("Bloch vector length {length} exceeds N/2 = {limit}")]
    OutsideBlochBall { length: f64, limit: f64 },
    #[error("atom count drifted: {accounted} accounted, {expected} expected")]
    AtomCount { accounted: f64, expected: f64 },
    #[error("invalid time step {dt}")]
    InvalidStep { dt: f64 },
    #[error("backward evolution requested with dissipation on")]
    IrreversibleBackward,
}

/// Parameters of a probed Rabi oscillation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiModel {
    /// Bare Rabi frequency Ω_R (rad/s).
    pub rabi_frequency: f64,
    pub microwave_detuning_hz: f64,
    /// Carrier light shift ΔE_c (J), duty-cycle averaged.
    pub carrier_light_shift: f64,
    /// Light-shift inhomogeneity factor α.
    pub inhomogeneity: f64,
    /// Probe-independent damping β_else (s⁻¹).
    pub residual_damping: f64,
    pub repetition_rate: f64,
    pub pulse_duration: f64,
}

impl RabiModel {
    pub fn duty_cycle(&self) -> f64 {
        self.repetition_rate * self.pulse_duration
    }

    pub fn validate(&self) -> Result<(), AtomsError> {
        if !(self.rabi_frequency >= 0.0) {
            return Err(AtomsError::domain("rabi_frequency", self.rabi_frequency, ">= 0"));
        }
        if !(self.inhomogeneity >= 0.0) {
            return Err(AtomsError::domain("inhomogeneity", self.inhomogeneity, ">= 0"));
        }
        if !(self.residual_damping >= 0.0) {
            return Err(AtomsError::domain("residual_damping", self.residual_damping, ">= 0"));
        }
        if !(0.0..=1.0).contains(&self.duty_cycle()) {
            return Err(AtomsError::domain("duty_cycle", self.duty_cycle(), "within [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampingRate {
    pub spontaneous: f64,
    pub shift: f64,
    pub residual: f64,
}

impl DampingRate {
    pub fn total(&self) -> f64 {
        self.spontaneous + self.shift + self.residual
    }
}

/// β_shift = α·ΔE_c²/(2ħ²Ω_R).
pub fn beta_shift(inhomogeneity: f64, light_shift: f64, rabi_frequency: f64) -> Result<f64, AtomsError> {
    if light_shift == 0.0 || inhomogeneity == 0.0 {
        return Ok(0.0);
    }
    if !(rabi_frequency > 0.0) {
        return Err(AtomsError::domain("rabi_frequency", rabi_frequency, "> 0 with a light shift"));
    }
    Ok(inhomogeneity * light_shift * light_shift / (2.0 * HBAR * HBAR * rabi_frequency))
}

/// β = β_spont + β_shift + β_else.
pub fn damping_rate(model: &RabiModel, spontaneous_rate: f64) -> Result<DampingRate, AtomsError> {
    model.validate()?;
    if !(spontaneous_rate >= 0.0) {
        return Err(AtomsError::domain("spontaneous_rate", spontaneous_rate, ">= 0"));
    }
    Ok(DampingRate {
        spontaneous: spontaneous_rate,
        shift: beta_shift(model.inhomogeneity, model.carrier_light_shift, model.rabi_frequency)?,
        residual: model.residual_damping,
    })
}

/// Change of the generalized Rabi frequency (Hz) between two light shifts.
pub fn rabi_frequency_pull(rabi_frequency: f64, shift_a_hz: f64, shift_b_hz: f64) -> f64 {
    let general = |shift: f64| (rabi_frequency.powi(2) + (2.0 * PI * shift).powi(2)).sqrt();
    (general(shift_a_hz) - general(shift_b_hz)) / (2.0 * PI)
}

/// Microwave drive held constant over a step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    /// Ω_R (rad/s).
    pub rabi_frequency: f64,
    pub detuning_hz: f64,
    /// Phase of the drive in the equatorial plane.
    pub phase: f64,
    /// Damping of the components transverse to the rotation axis (s⁻¹).
    pub damping: f64,
}

impl Drive {
    pub fn resonant(rabi_frequency: f64) -> Self {
        Drive {
            rabi_frequency,
            detuning_hz: 0.0,
            phase: 0.0,
            damping: 0.0,
        }
    }

    pub fn free(detuning_hz: f64) -> Self {
        Drive {
            rabi_frequency: 0.0,
            detuning_hz,
            phase: 0.0,
            damping: 0.0,
        }
    }
}

/// Instantaneous probe action on the clock states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeCoupling {
    /// Differential clock shift added to the microwave detuning (Hz).
    pub light_shift_hz: f64,
    /// Scattering rate of |F=2,0⟩ atoms (s⁻¹).
    pub f2_scattering_rate: f64,
    /// Pumping rate of |F=1,0⟩ atoms into |F=2⟩ (s⁻¹).
    pub f1_pumping_rate: f64,
    /// Fraction of |F=2,0⟩ scattering events that end in m_F≠0.
    pub leak_fraction: f64,
    /// Fraction of atoms pumped from |F=1⟩ that land in |F=2,0⟩.
    pub pump_to_clock: f64,
}

impl ProbeCoupling {
    pub fn off() -> Self {
        ProbeCoupling {
            light_shift_hz: 0.0,
            f2_scattering_rate: 0.0,
            f1_pumping_rate: 0.0,
            leak_fraction: 0.5,
            pump_to_clock: 0.2,
        }
    }

    /// Coupling while the probe pulse is on; `scale` is 1 for exact gating or
    /// the duty cycle for averaged rates.
    pub fn from_clock_probe(probe: &ClockProbe, scale: f64, leak_fraction: f64) -> Self {
        ProbeCoupling {
            light_shift_hz: probe.clock_shift().total_hz() * scale,
            f2_scattering_rate: probe.f2_scattering_rate() * scale,
            f1_pumping_rate: probe.f1_pumping_rate() * scale,
            leak_fraction,
            pump_to_clock: 0.2,
        }
    }

    pub fn is_dissipative(&self) -> bool {
        self.f2_scattering_rate != 0.0 || self.f1_pumping_rate != 0.0
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// dJ/dt = ω × J for time `h`, with the part of J transverse to ω damped as
/// e^(−βh).
fn rotate(bloch: &mut [f64; 3], omega: [f64; 3], damping: f64, h: f64) {
    let w = omega.iter().map(|v| v * v).sum::<f64>().sqrt();
    let n = if w > 0.0 {
        [omega[0] / w, omega[1] / w, omega[2] / w]
    } else {
        [0.0, 0.0, 1.0]
    };
    let v = *bloch;
    let along = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
    let par = [along * n[0], along * n[1], along * n[2]];
    let perp = [v[0] - par[0], v[1] - par[1], v[2] - par[2]];
    let turn = cross(n, perp);
    let (sin, cos) = (w * h).sin_cos();
    let decay = if damping == 0.0 { 1.0 } else { (-damping * h).exp() };
    for i in 0..3 {
        bloch[i] = par[i] + decay * (perp[i] * cos + turn[i] * sin);
    }
}

fn probe_step(state: &mut EnsembleState, probe: &ProbeCoupling, h: f64) {
    let na = state.f1_population();
    let nb = state.f2_population();
    let na_new = na * (-probe.f1_pumping_rate * h).exp();
    let pumped = na - na_new;
    let kept = (-probe.f2_scattering_rate * probe.leak_fraction * h).exp();
    let nb_new = nb * kept + pumped * probe.pump_to_clock;
    state.leaked += nb * (1.0 - kept) + pumped * (1.0 - probe.pump_to_clock);
    state.clock_population = na_new + nb_new;
    let coherence = (-0.5 * (probe.f1_pumping_rate + probe.f2_scattering_rate) * h).exp();
    state.bloch[0] *= coherence;
    state.bloch[1] *= coherence;
    state.bloch[2] = 0.5 * (nb_new - na_new);
}

/// Advance the ensemble by `dt` under a constant drive and probe coupling.
///
/// Without probe dissipation the step is a single exact rotation. Otherwise
/// the rotation and the probe-induced transfer are Strang-split on substeps.
/// Negative `dt` is accepted only when nothing is dissipative.
pub fn evolve(
    state: &EnsembleState,
    drive: &Drive,
    probe: &ProbeCoupling,
    dt: f64,
) -> Result<EnsembleState, StepError> {
    if !dt.is_finite() {
        return Err(StepError::InvalidStep { dt });
    }
    let dissipative = drive.damping != 0.0 || probe.is_dissipative();
    if dt < 0.0 && dissipative {
        return Err(StepError::IrreversibleBackward);
    }
    let omega = [
        drive.rabi_frequency * drive.phase.cos(),
        drive.rabi_frequency * drive.phase.sin(),
        2.0 * PI * (drive.detuning_hz + probe.light_shift_hz),
    ];
    let mut next = *state;
    if !probe.is_dissipative() {
        rotate(&mut next.bloch, omega, drive.damping, dt);
    } else {
        let w = omega.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rate = probe.f1_pumping_rate + probe.f2_scattering_rate;
        let substeps = ((dt * w.max(rate)) / MAX_SUBSTEP_ANGLE).ceil().max(1.0) as usize;
        let h = dt / substeps as f64;
        for _ in 0..substeps {
            probe_step(&mut next, probe, 0.5 * h);
            rotate(&mut next.bloch, omega, drive.damping, h);
            probe_step(&mut next, probe, 0.5 * h);
        }
    }
    next.validate()?;
    Ok(next)
}
