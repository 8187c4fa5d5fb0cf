//! D2-line probe bookkeeping: spontaneous scattering and AC Stark shifts.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::AtomsError;
use crate::constants::{rb87, PLANCK};
use crate::heterodyne::{ModulatedProbe, Sideband};

/// Signal loss from fall and expansion of the released cloud (s⁻¹).
pub const DEFAULT_EXPANSION_RATE: f64 = 120.0;

/// Peak intensity 2P/(πw²) of a TEM₀₀ beam.
pub fn beam_intensity(power: f64, waist: f64) -> f64 {
    2.0 * power / (PI * waist * waist)
}

/// Probe configuration for the |F=1⟩ pumping measurement: the sideband sits
/// `sideband_detuning` linewidths from F=1 → F'=2 and the carrier is detuned
/// by Δ_i from each F=1 → F'=i line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeTuning {
    /// δ in units of Γ.
    pub sideband_detuning: f64,
    pub carrier_detunings_hz: [f64; 3],
    pub sideband_intensity: f64,
    pub carrier_intensity: f64,
    /// Γ/2π.
    pub linewidth_hz: f64,
    pub saturation_intensity: [f64; 3],
    pub branching: [f64; 3],
}

impl ProbeTuning {
    /// Carrier detunings Δ_i = Δ + Δ_2i where Δ_2i is the F'=2 to F'=i gap.
    pub fn new(
        sideband_detuning: f64,
        carrier_detuning_hz: f64,
        sideband_power: f64,
        carrier_power: f64,
        waist: f64,
    ) -> Self {
        let gap = |i: usize| rb87::EXCITED_OFFSET_HZ[2] - rb87::EXCITED_OFFSET_HZ[i];
        ProbeTuning {
            sideband_detuning,
            carrier_detunings_hz: [0, 1, 2].map(|i| carrier_detuning_hz + gap(i)),
            sideband_intensity: beam_intensity(sideband_power, waist),
            carrier_intensity: beam_intensity(carrier_power, waist),
            linewidth_hz: rb87::D2_LINEWIDTH_HZ,
            saturation_intensity: rb87::F1_SATURATION_INTENSITY,
            branching: rb87::F1_BRANCHING_TO_F2,
        }
    }

    /// 245 µm waist, 120 µW carrier at 2.808 GHz, 76 nW per sideband.
    pub fn pumping_probe(sideband_detuning: f64) -> Self {
        Self::new(sideband_detuning, 2.808e9, 76e-9, 120e-6, 245e-6)
    }

    pub fn validate(&self) -> Result<(), AtomsError> {
        if !(self.linewidth_hz > 0.0) {
            return Err(AtomsError::domain("linewidth_hz", self.linewidth_hz, "> 0"));
        }
        if !(self.sideband_intensity >= 0.0) || !(self.carrier_intensity >= 0.0) {
            return Err(AtomsError::domain(
                "intensity",
                self.sideband_intensity.min(self.carrier_intensity),
                ">= 0",
            ));
        }
        if self.saturation_intensity.iter().any(|&i| !(i > 0.0)) {
            return Err(AtomsError::domain("saturation_intensity", 0.0, "> 0"));
        }
        if self.branching.iter().any(|&b| !(0.0..=1.0).contains(&b)) {
            return Err(AtomsError::domain("branching", 0.0, "within [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringRate {
    pub sideband: f64,
    pub carrier: f64,
    pub expansion: f64,
}

impl ScatteringRate {
    pub fn total(&self) -> f64 {
        self.sideband + self.carrier + self.expansion
    }
}

fn saturated_rate(gamma: f64, intensity: f64, isat: f64, detuning_over_gamma: f64) -> f64 {
    let s = intensity / isat;
    gamma * 0.5 * s / (1.0 + 4.0 * detuning_over_gamma.powi(2) + s)
}

/// Pumping rate γ = γ_s + γ_c + γ_exp of |F=1⟩ atoms into |F=2⟩ (s⁻¹).
pub fn scattering_rate(tuning: &ProbeTuning, expansion_rate: f64) -> ScatteringRate {
    let gamma = 2.0 * PI * tuning.linewidth_hz;
    let sideband = tuning.branching[2]
        * saturated_rate(
            gamma,
            tuning.sideband_intensity,
            tuning.saturation_intensity[2],
            tuning.sideband_detuning,
        );
    let carrier = (0..3)
        .map(|i| {
            tuning.branching[i]
                * saturated_rate(
                    gamma,
                    tuning.carrier_intensity,
                    tuning.saturation_intensity[i],
                    tuning.carrier_detunings_hz[i] / tuning.linewidth_hz,
                )
        })
        .sum();
    ScatteringRate {
        sideband,
        carrier,
        expansion: expansion_rate,
    }
}

/// One ground-to-excited π line seen by a clock state.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    excited: usize,
    saturation_intensity: f64,
    branching_to_f2: f64,
}

fn clock_lines(ground_f: u8) -> Vec<Line> {
    if ground_f == 1 {
        (0..3)
            .map(|i| Line {
                excited: i,
                saturation_intensity: rb87::F1_SATURATION_INTENSITY[i],
                branching_to_f2: rb87::F1_BRANCHING_TO_F2[i],
            })
            .collect()
    } else {
        (0..4)
            .filter(|&i| rb87::F2_CLOCK_PI_STRENGTH[i] > 0.0)
            .map(|i| Line {
                excited: i,
                saturation_intensity: rb87::CYCLING_SATURATION_INTENSITY * 0.5 / rb87::F2_CLOCK_PI_STRENGTH[i],
                branching_to_f2: 1.0,
            })
            .collect()
    }
}

/// Probe addressing |F=2⟩ for the Rabi and spin-echo experiments. Frequencies
/// are measured from F=2 → F'=3; the lower sideband probes the atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockProbe {
    pub carrier_power: f64,
    pub sideband_power: f64,
    pub waist: f64,
    pub carrier_detuning_hz: f64,
    pub sideband_detuning_hz: f64,
    pub ram_asymmetry: f64,
    pub path_length: f64,
    pub linewidth_hz: f64,
}

impl ClockProbe {
    /// 70 µW carrier 2.5 GHz blue of F=2 → F'=3, 90 nW per sideband,
    /// 800 µm waist.
    pub fn rabi_probe(sideband_detuning_gamma: f64) -> Self {
        ClockProbe {
            carrier_power: 70e-6,
            sideband_power: 90e-9,
            waist: 800e-6,
            carrier_detuning_hz: 2.5e9,
            sideband_detuning_hz: sideband_detuning_gamma * rb87::D2_LINEWIDTH_HZ,
            ram_asymmetry: 1e-2,
            path_length: 1.0,
            linewidth_hz: rb87::D2_LINEWIDTH_HZ,
        }
    }

    pub fn modulation_frequency_hz(&self) -> f64 {
        self.carrier_detuning_hz - self.sideband_detuning_hz
    }

    pub fn carrier_intensity(&self) -> f64 {
        beam_intensity(self.carrier_power, self.waist)
    }

    pub fn sideband_intensity(&self) -> f64 {
        beam_intensity(self.sideband_power, self.waist)
    }

    /// Optical fields as (offset from F=2 → F'=3, peak intensity).
    fn fields(&self, include_carrier: bool, include_sidebands: bool) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(3);
        if include_carrier {
            out.push((self.carrier_detuning_hz, self.carrier_intensity()));
        }
        if include_sidebands {
            let upper = 2.0 * self.carrier_detuning_hz - self.sideband_detuning_hz;
            out.push((self.sideband_detuning_hz, self.sideband_intensity()));
            out.push((upper, self.sideband_intensity()));
        }
        out
    }

    /// Detected-field description for the heterodyne chain.
    pub fn modulated_probe(&self) -> ModulatedProbe {
        ModulatedProbe {
            carrier_power: self.carrier_power,
            modulation_depth: (self.sideband_power / self.carrier_power).sqrt(),
            modulation_frequency_hz: self.modulation_frequency_hz(),
            ram_asymmetry: self.ram_asymmetry,
            carrier_detuning_hz: self.carrier_detuning_hz,
            probing_sideband: Sideband::Lower,
            beam_waist: self.waist,
            path_length: self.path_length,
        }
    }

    pub fn validate(&self) -> Result<(), AtomsError> {
        for (name, value) in [
            ("carrier_power", self.carrier_power),
            ("sideband_power", self.sideband_power),
        ] {
            if !(value >= 0.0) {
                return Err(AtomsError::domain(name, value, ">= 0"));
            }
        }
        for (name, value) in [("waist", self.waist), ("linewidth_hz", self.linewidth_hz)] {
            if !(value > 0.0) {
                return Err(AtomsError::domain(name, value, "> 0"));
            }
        }
        if !(self.modulation_frequency_hz() > 0.0) {
            return Err(AtomsError::domain(
                "carrier_detuning_hz",
                self.carrier_detuning_hz,
                "above the probing sideband",
            ));
        }
        Ok(())
    }

    fn level_shift_hz(&self, ground_f: u8, fields: &[(f64, f64)]) -> f64 {
        let g = self.linewidth_hz;
        let mut shift = 0.0;
        for line in clock_lines(ground_f) {
            let transition = rb87::transition_offset_hz(ground_f, line.excited);
            for &(frequency, intensity) in fields {
                let delta = frequency - transition;
                shift += g * g * intensity / (8.0 * line.saturation_intensity) * delta / (delta * delta + 0.25 * g * g);
            }
        }
        shift
    }

    fn level_rate(&self, ground_f: u8, weighted: bool) -> f64 {
        let gamma = 2.0 * PI * self.linewidth_hz;
        let fields = self.fields(true, true);
        let mut rate = 0.0;
        for line in clock_lines(ground_f) {
            let transition = rb87::transition_offset_hz(ground_f, line.excited);
            let weight = if weighted { line.branching_to_f2 } else { 1.0 };
            for &(frequency, intensity) in &fields {
                let x = (frequency - transition) / self.linewidth_hz;
                rate += weight * saturated_rate(gamma, intensity, line.saturation_intensity, x);
            }
        }
        rate
    }

    /// Instantaneous scattering rate of a |F=2,0⟩ atom while the probe is on.
    pub fn f2_scattering_rate(&self) -> f64 {
        self.level_rate(2, false)
    }

    /// Instantaneous scattering rate of |F=2,0⟩ from the probing sideband only.
    pub fn f2_sideband_scattering_rate(&self) -> f64 {
        let gamma = 2.0 * PI * self.linewidth_hz;
        clock_lines(2)
            .iter()
            .map(|line| {
                let x = (self.sideband_detuning_hz - rb87::transition_offset_hz(2, line.excited)) / self.linewidth_hz;
                saturated_rate(gamma, self.sideband_intensity(), line.saturation_intensity, x)
            })
            .sum()
    }

    /// Instantaneous rate at which |F=1,0⟩ atoms are pumped into |F=2⟩.
    pub fn f1_pumping_rate(&self) -> f64 {
        self.level_rate(1, true)
    }

    /// Instantaneous clock-transition shift (Hz) split by field.
    pub fn clock_shift(&self) -> LightShift {
        let carrier = self.fields(true, false);
        let sidebands = self.fields(false, true);
        LightShift {
            carrier_hz: self.level_shift_hz(2, &carrier) - self.level_shift_hz(1, &carrier),
            sideband_hz: self.level_shift_hz(2, &sidebands) - self.level_shift_hz(1, &sidebands),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LightShift {
    pub carrier_hz: f64,
    pub sideband_hz: f64,
}

impl LightShift {
    pub fn total_hz(&self) -> f64 {
        self.carrier_hz + self.sideband_hz
    }

    pub fn total_joules(&self) -> f64 {
        PLANCK * self.total_hz()
    }

    pub fn carrier_joules(&self) -> f64 {
        PLANCK * self.carrier_hz
    }

    pub fn scaled(&self, factor: f64) -> Self {
        LightShift {
            carrier_hz: self.carrier_hz * factor,
            sideband_hz: self.sideband_hz * factor,
        }
    }
}

/// Duty-cycle-averaged differential light shift of the clock states.
pub fn light_shift(probe: &ClockProbe, duty_cycle: f64) -> Result<LightShift, AtomsError> {
    if !(0.0..=1.0).contains(&duty_cycle) {
        return Err(AtomsError::domain("duty_cycle", duty_cycle, "within [0, 1]"));
    }
    probe.validate()?;
    Ok(probe.clock_shift().scaled(duty_cycle))
}
