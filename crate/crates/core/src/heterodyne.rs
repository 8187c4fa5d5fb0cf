//! Frequency-modulation (heterodyne) detection of the atomic phase shift.
//!
//! A phase-modulated probe carries a carrier and two first-order sidebands.
//! One sideband sits near an atomic resonance and picks up the dispersive
//! phase φ_at; the carrier, far detuned, acts as local oscillator. The beat
//! note at Ω is demodulated against sin(Ωt + Φ_dem).

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{rb87, ELEMENTARY_CHARGE, SPEED_OF_LIGHT};

/// Largest modulation depth for which J₀ ≈ 1, J±₁ ≈ ±β holds.
pub const MAX_MODULATION_DEPTH: f64 = 0.3;
/// Largest atomic phase for which the second-order expansions hold.
pub const MAX_SMALL_PHASE: f64 = 0.3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeterodyneError {
    #[error("{quantity} = {value} outside the regime of validity (|x| < {limit})")]
    Regime {
        quantity: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("{name} = {value} outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

fn domain(name: &'static str, value: f64, expected: &'static str) -> HeterodyneError {
    HeterodyneError::Domain {
        name,
        value,
        expected,
    }
}

/// Which first-order sideband addresses the atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sideband {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulatedProbe {
    /// Local-oscillator (carrier) power on the detector.
    pub carrier_power: f64,
    pub modulation_depth: f64,
    /// Ω/2π.
    pub modulation_frequency_hz: f64,
    /// Sideband amplitude asymmetry ε from residual amplitude modulation.
    pub ram_asymmetry: f64,
    /// Carrier frequency relative to the probed atomic transition.
    pub carrier_detuning_hz: f64,
    pub probing_sideband: Sideband,
    pub beam_waist: f64,
    /// Modulator-to-detector distance.
    pub path_length: f64,
}

impl ModulatedProbe {
    /// Build from the carrier and per-sideband powers (β² = P_s/P_c).
    pub fn from_powers(
        carrier_power: f64,
        sideband_power: f64,
        modulation_frequency_hz: f64,
        beam_waist: f64,
    ) -> Self {
        ModulatedProbe {
            carrier_power,
            modulation_depth: (sideband_power / carrier_power).sqrt(),
            modulation_frequency_hz,
            ram_asymmetry: 0.0,
            carrier_detuning_hz: modulation_frequency_hz,
            probing_sideband: Sideband::Lower,
            beam_waist,
            path_length: 1.0,
        }
    }

    pub fn sideband_power(&self) -> f64 {
        self.modulation_depth.powi(2) * self.carrier_power
    }

    pub fn modulation_angular_frequency(&self) -> f64 {
        2.0 * PI * self.modulation_frequency_hz
    }

    /// λ_mod = 2πc/Ω.
    pub fn modulation_wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.modulation_frequency_hz
    }

    /// Detuning of the probing sideband from the atomic transition.
    pub fn sideband_detuning_hz(&self) -> f64 {
        match self.probing_sideband {
            Sideband::Lower => self.carrier_detuning_hz - self.modulation_frequency_hz,
            Sideband::Upper => self.carrier_detuning_hz + self.modulation_frequency_hz,
        }
    }

    /// Demodulation phase that selects the dispersive quadrature, ΩL/c.
    pub fn nominal_demodulation_phase(&self) -> f64 {
        self.modulation_angular_frequency() * self.path_length / SPEED_OF_LIGHT
    }

    /// Phase triple with the atomic phase on the probing sideband only.
    pub fn phases(&self, atomic_phase: f64) -> PhaseShiftTriple {
        match self.probing_sideband {
            Sideband::Lower => PhaseShiftTriple::new(atomic_phase, 0.0, 0.0),
            Sideband::Upper => PhaseShiftTriple::new(0.0, 0.0, atomic_phase),
        }
    }

    pub fn validate(&self) -> Result<(), HeterodyneError> {
        if !(self.carrier_power >= 0.0) {
            return Err(domain("carrier_power", self.carrier_power, ">= 0"));
        }
        if !(self.modulation_depth >= 0.0) {
            return Err(domain("modulation_depth", self.modulation_depth, ">= 0"));
        }
        if self.modulation_depth > MAX_MODULATION_DEPTH {
            return Err(HeterodyneError::Regime {
                quantity: "modulation_depth",
                value: self.modulation_depth,
                limit: MAX_MODULATION_DEPTH,
            });
        }
        if !(self.ram_asymmetry.abs() < 1.0) {
            return Err(domain("ram_asymmetry", self.ram_asymmetry, "|ε| < 1"));
        }
        if !(self.modulation_frequency_hz > 0.0) {
            return Err(domain("modulation_frequency_hz", self.modulation_frequency_hz, "> 0"));
        }
        if !(self.beam_waist > 0.0) {
            return Err(domain("beam_waist", self.beam_waist, "> 0"));
        }
        Ok(())
    }
}

/// Atomic phase on the lower sideband, carrier and upper sideband.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftTriple {
    pub lower: f64,
    pub carrier: f64,
    pub upper: f64,
}

impl PhaseShiftTriple {
    pub fn new(lower: f64, carrier: f64, upper: f64) -> Self {
        PhaseShiftTriple {
            lower,
            carrier,
            upper,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.abs().max(self.carrier.abs()).max(self.upper.abs())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PhaseShiftTriple::new(self.lower * factor, self.carrier * factor, self.upper * factor)
    }

    fn check_small(&self) -> Result<(), HeterodyneError> {
        let value = self.max_abs();
        if !(value < MAX_SMALL_PHASE) {
            return Err(HeterodyneError::Regime {
                quantity: "atomic phase",
                value,
                limit: MAX_SMALL_PHASE,
            });
        }
        Ok(())
    }
}

/// Quadrature weights of the beat note. `plus`/`minus` come from pure phase
/// modulation, the `_am` pair from the amplitude-modulated part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureWeights {
    pub plus: f64,
    pub minus: f64,
    pub plus_am: f64,
    pub minus_am: f64,
}

/// Exact trigonometric weights for arbitrary phases.
pub fn exact_quadratures(phases: &PhaseShiftTriple) -> QuadratureWeights {
    let a = phases.upper - phases.carrier;
    let b = phases.carrier - phases.lower;
    QuadratureWeights {
        plus: a.cos() - b.cos(),
        minus: a.sin() - b.sin(),
        plus_am: a.cos() + b.cos(),
        minus_am: a.sin() + b.sin(),
    }
}

/// Second-order expansion of the weights for small phases.
pub fn small_phase_expansion(phases: &PhaseShiftTriple) -> Result<QuadratureWeights, HeterodyneError> {
    phases.check_small()?;
    let PhaseShiftTriple { lower, carrier, upper } = *phases;
    Ok(QuadratureWeights {
        plus: 0.5 * (upper - lower) * (2.0 * carrier - upper - lower),
        minus: upper + lower - 2.0 * carrier,
        plus_am: 2.0 - 0.5 * ((upper - carrier).powi(2) + (lower - carrier).powi(2)),
        minus_am: upper - lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    /// Photodiode responsivity η (A/W).
    pub sensitivity: f64,
    /// Transimpedance R_F (Ω).
    pub transimpedance: f64,
    pub buffer_gain: f64,
    /// Load R_L (Ω).
    pub load: f64,
    pub bandwidth: f64,
    /// Optical power whose shot noise equals the electronic noise (W).
    pub electronic_noise_power: f64,
}

impl DetectorModel {
    /// Detector at 1 GHz: G_PD = 1466 V/W, κ = 165 µW.
    pub fn paper_1ghz() -> Self {
        DetectorModel {
            sensitivity: 0.5,
            transimpedance: 1000.0,
            buffer_gain: 2.932,
            load: 50.0,
            bandwidth: 1e9,
            electronic_noise_power: 165e-6,
        }
    }

    /// Detector at 2 GHz: G_PD = 880 V/W, κ = 469 µW.
    pub fn paper_2ghz() -> Self {
        DetectorModel {
            buffer_gain: 1.76,
            bandwidth: 2e9,
            electronic_noise_power: 469e-6,
            ..Self::paper_1ghz()
        }
    }

    /// G_PD = g·R_F·η (V/W).
    pub fn gain(&self) -> f64 {
        self.buffer_gain * self.transimpedance * self.sensitivity
    }

    pub fn validate(&self) -> Result<(), HeterodyneError> {
        for (name, value) in [
            ("sensitivity", self.sensitivity),
            ("transimpedance", self.transimpedance),
            ("buffer_gain", self.buffer_gain),
            ("load", self.load),
            ("bandwidth", self.bandwidth),
        ] {
            if !(value > 0.0) {
                return Err(domain(name, value, "> 0"));
            }
        }
        if !(self.electronic_noise_power >= 0.0) {
            return Err(domain("electronic_noise_power", self.electronic_noise_power, ">= 0"));
        }
        Ok(())
    }
}

/// Two-level line used for the dispersive phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicLine {
    pub wavelength: f64,
    /// Γ/2π.
    pub linewidth_hz: f64,
}

impl AtomicLine {
    pub fn rb87_d2() -> Self {
        AtomicLine {
            wavelength: rb87::D2_WAVELENGTH,
            linewidth_hz: rb87::D2_LINEWIDTH_HZ,
        }
    }

    pub fn cross_section(&self) -> f64 {
        3.0 * self.wavelength * self.wavelength / (2.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomicPhase {
    pub phase: f64,
    pub optical_density: f64,
    /// False when |φ| exceeds the small-phase bound.
    pub small_phase: bool,
}

/// Resonant optical density seen by a Gaussian beam of waist `beam_waist`
/// crossing a Gaussian cloud of transverse rms `cloud_rms`, using the
/// intensity-weighted column density 2N/(π(w² + 4σ²)).
pub fn resonant_optical_density(atom_number: f64, beam_waist: f64, cloud_rms: f64, line: &AtomicLine) -> f64 {
    let column = 2.0 * atom_number / (PI * (beam_waist.powi(2) + 4.0 * cloud_rms.powi(2)));
    line.cross_section() * column
}

/// Dispersive phase of a two-level ensemble on a probe detuned by
/// `detuning_hz`: φ = −(ρ₀/2)·x/(1 + x²), x = 2δ/Γ.
pub fn atomic_phase(
    detuning_hz: f64,
    atom_number: f64,
    beam_waist: f64,
    cloud_rms: f64,
    line: &AtomicLine,
) -> AtomicPhase {
    let rho = resonant_optical_density(atom_number, beam_waist, cloud_rms, line);
    let x = 2.0 * detuning_hz / line.linewidth_hz;
    let phase = -0.5 * rho * x / (1.0 + x * x);
    AtomicPhase {
        phase,
        optical_density: rho,
        small_phase: phase.abs() <= MAX_SMALL_PHASE,
    }
}

/// Demodulated output voltage.
///
/// The photocurrent is mixed with sin(Ωt + Φ_dem). With the residual
/// demodulation angle ψ = Ω(L + δL)/c − Φ_dem kept to first order, the output
/// is `G_PD·β·P·[(ΔΦ₋ + εΔΦ₋,AM) + ψ·(ΔΦ₊ + εΔΦ₊,AM)]`. For the default
/// Φ_dem = ΩL/c this is ψ = 2π·δL/λ_mod.
pub fn demodulated_signal(
    probe: &ModulatedProbe,
    phases: &PhaseShiftTriple,
    detector: &DetectorModel,
    demodulation_phase: Option<f64>,
    path_error: f64,
) -> Result<f64, HeterodyneError> {
    probe.validate()?;
    phases.check_small()?;
    let w = exact_quadratures(phases);
    let psi = demodulation_angle(probe, demodulation_phase, path_error);
    let eps = probe.ram_asymmetry;
    let bracket = (w.minus + eps * w.minus_am) + psi * (w.plus + eps * w.plus_am);
    Ok(detector.gain() * probe.modulation_depth * probe.carrier_power * bracket)
}

/// ψ = Ω(L + δL)/c − Φ_dem, evaluated as Ω·δL/c + (ΩL/c − Φ_dem) so that the
/// default phase gives exactly 2π·δL/λ_mod.
pub fn demodulation_angle(probe: &ModulatedProbe, demodulation_phase: Option<f64>, path_error: f64) -> f64 {
    let offset = match demodulation_phase {
        Some(phi) => probe.nominal_demodulation_phase() - phi,
        None => 0.0,
    };
    probe.modulation_angular_frequency() * path_error / SPEED_OF_LIGHT + offset
}

/// Output change per unit path-length error (V/m).
pub fn length_sensitivity(
    probe: &ModulatedProbe,
    phases: &PhaseShiftTriple,
    detector: &DetectorModel,
) -> Result<f64, HeterodyneError> {
    let step = probe.modulation_wavelength() * 1e-6;
    let hi = demodulated_signal(probe, phases, detector, None, step)?;
    let lo = demodulated_signal(probe, phases, detector, None, -step)?;
    Ok((hi - lo) / (2.0 * step))
}

/// Sensitivity of a λ-referenced two-arm interferometer carrying the same
/// power into the same detector: G_PD·β·P·2π/λ (V/m).
pub fn interferometer_length_sensitivity(probe: &ModulatedProbe, detector: &DetectorModel, wavelength: f64) -> f64 {
    detector.gain() * probe.modulation_depth * probe.carrier_power * 2.0 * PI / wavelength
}

/// Equivalent SNR of the heterodyne measurement (unit proportionality):
/// √(N_s N_c)/√(N_s + N_c + N_e)·sinφ.
pub fn detection_snr(sideband_photons: f64, carrier_photons: f64, noise_photons: f64, phase: f64) -> f64 {
    let total = sideband_photons + carrier_photons + noise_photons;
    if total <= 0.0 {
        return 0.0;
    }
    (sideband_photons * carrier_photons).sqrt() / total.sqrt() * phase.sin()
}

/// Output noise PSD on the load (W/Hz): the shot-noise slope
/// 2e·G²/(R_L η)·P plus the electronic floor at P = κ_e.
pub fn shot_noise_psd(detector: &DetectorModel, optical_power: f64) -> f64 {
    shot_noise_slope(detector) * (optical_power + detector.electronic_noise_power)
}

pub fn shot_noise_slope(detector: &DetectorModel) -> f64 {
    2.0 * ELEMENTARY_CHARGE * detector.gain().powi(2) / (detector.load * detector.sensitivity)
}

/// Invert a measured PSD slope into the detector gain G_PD.
pub fn gain_from_slope(slope: f64, sensitivity: f64, load: f64) -> f64 {
    (slope * load * sensitivity / (2.0 * ELEMENTARY_CHARGE)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdLine {
    pub slope: f64,
    pub intercept: f64,
}

impl PsdLine {
    /// Optical power at which shot noise equals the electronic floor.
    pub fn electronic_noise_power(&self) -> f64 {
        self.intercept / self.slope
    }
}

/// Ordinary least-squares line through (power, PSD) points.
pub fn fit_psd_line(powers: &[f64], psd: &[f64]) -> Result<PsdLine, HeterodyneError> {
    if powers.len() != psd.len() || powers.len() < 2 {
        return Err(domain("points", powers.len() as f64, ">= 2 matched samples"));
    }
    let n = powers.len() as f64;
    let mean_p = powers.iter().sum::<f64>() / n;
    let mean_s = psd.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&p, &s) in powers.iter().zip(psd) {
        sxy += (p - mean_p) * (s - mean_s);
        sxx += (p - mean_p).powi(2);
    }
    if sxx == 0.0 {
        return Err(domain("power spread", 0.0, "> 0"));
    }
    let slope = sxy / sxx;
    Ok(PsdLine {
        slope,
        intercept: mean_s - slope * mean_p,
    })
}

/// Single-sided noise bandwidth of a pulse of duration `t`.
pub fn pulse_bandwidth(duration: f64) -> f64 {
    0.5 / duration
}

/// Rms output noise (V) for one pulse with `probe.carrier_power` on the
/// detector.
pub fn noise_std(detector: &DetectorModel, probe: &ModulatedProbe, pulse_duration: f64) -> f64 {
    let psd = shot_noise_psd(detector, probe.carrier_power);
    (psd * detector.load * pulse_bandwidth(pulse_duration)).sqrt()
}

/// One noisy realisation of a pulse-averaged demodulated sample.
pub fn sample_noisy_signal<R: Rng + ?Sized>(
    ideal: f64,
    detector: &DetectorModel,
    probe: &ModulatedProbe,
    pulse_duration: f64,
    rng: &mut R,
) -> Result<f64, HeterodyneError> {
    if !(pulse_duration > 0.0) {
        return Err(domain("pulse_duration", pulse_duration, "> 0"));
    }
    let sigma = noise_std(detector, probe, pulse_duration);
    if sigma == 0.0 {
        return Ok(ideal);
    }
    let z: f64 = StandardNormal.sample(rng);
    Ok(ideal + sigma * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn probe() -> ModulatedProbe {
        ModulatedProbe {
            carrier_power: 120e-6,
            modulation_depth: 0.025,
            modulation_frequency_hz: SPEED_OF_LIGHT / 0.1,
            ram_asymmetry: 0.0,
            carrier_detuning_hz: 0.0,
            probing_sideband: Sideband::Upper,
            beam_waist: 245e-6,
            path_length: 1.3,
        }
    }

    #[test]
    fn expansion_examples() {
        let w = small_phase_expansion(&PhaseShiftTriple::new(0.0, 0.0, 0.01)).unwrap();
        assert_relative_eq!(w.minus, 0.01, max_relative = 1e-15);
        assert_relative_eq!(w.plus, -5e-5, max_relative = 1e-12);
        let zero = small_phase_expansion(&PhaseShiftTriple::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!((zero.plus, zero.minus, zero.plus_am, zero.minus_am), (0.0, 0.0, 2.0, 0.0));
        assert!(matches!(
            small_phase_expansion(&PhaseShiftTriple::new(0.0, 0.31, 0.0)),
            Err(HeterodyneError::Regime { .. })
        ));
    }

    #[test]
    fn expansion_residual_is_third_order() {
        let base = PhaseShiftTriple::new(-0.07, 0.03, 0.09);
        let residual = |p: &PhaseShiftTriple| {
            let e = exact_quadratures(p);
            let s = small_phase_expansion(p).unwrap();
            [e.plus - s.plus, e.minus - s.minus, e.plus_am - s.plus_am, e.minus_am - s.minus_am]
                .iter()
                .fold(0.0f64, |m, r| m.max(r.abs()))
        };
        let r1 = residual(&base);
        let r2 = residual(&base.scaled(0.5));
        assert!(r1 / r2 >= 7.0, "ratio {}", r1 / r2);
    }

    #[test]
    fn pure_dispersive_signal() {
        let p = probe();
        let det = DetectorModel::paper_1ghz();
        let phi = 0.05;
        let s = demodulated_signal(&p, &PhaseShiftTriple::new(0.0, 0.0, phi), &det, None, 0.0).unwrap();
        let scale = det.gain() * p.modulation_depth * p.carrier_power;
        assert_relative_eq!(s, scale * phi.sin(), max_relative = 1e-12);
        let zero = demodulated_signal(&p, &PhaseShiftTriple::new(0.0, 0.0, 0.0), &det, None, 0.0).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn odd_under_phase_flip() {
        let p = probe();
        let det = DetectorModel::paper_1ghz();
        let t = PhaseShiftTriple::new(0.02, -0.05, 0.11);
        let a = demodulated_signal(&p, &t, &det, None, 0.0).unwrap();
        let b = demodulated_signal(&p, &t.scaled(-1.0), &det, None, 0.0).unwrap();
        assert_relative_eq!(a, -b, max_relative = 1e-14);
    }

    #[test]
    fn length_noise_without_ram() {
        // δS_L = 2π·ηβP·(δL/λ_mod)·ΔΦ₊ with ΔΦ₊ ≈ −φ²/2, i.e. −π·ηβP·φ²·δL/λ_mod
        let p = probe();
        let det = DetectorModel::paper_1ghz();
        let lambda_mod = p.modulation_wavelength();
        let scale = det.gain() * p.modulation_depth * p.carrier_power;
        for phi in [0.02, 0.05, 0.1] {
            let t = PhaseShiftTriple::new(0.0, 0.0, phi);
            let s0 = demodulated_signal(&p, &t, &det, None, 0.0).unwrap();
            for dl in [lambda_mod * 1e-4, lambda_mod * 1e-3, lambda_mod / 100.0] {
                let ds = demodulated_signal(&p, &t, &det, None, dl).unwrap() - s0;
                let expected = -PI * scale * phi * phi * dl / lambda_mod;
                assert!((ds / expected - 1.0).abs() < 0.01, "phi {phi}, dl {dl}: {ds} vs {expected}");
            }
        }
    }

    #[test]
    fn regime_errors() {
        let det = DetectorModel::paper_1ghz();
        let mut p = probe();
        let t = PhaseShiftTriple::new(0.0, 0.0, 0.4);
        assert!(matches!(demodulated_signal(&p, &t, &det, None, 0.0), Err(HeterodyneError::Regime { .. })));
        p.modulation_depth = 2.0;
        let t = PhaseShiftTriple::new(0.0, 0.0, 0.1);
        assert!(matches!(demodulated_signal(&p, &t, &det, None, 0.0), Err(HeterodyneError::Regime { .. })));
    }

    #[test]
    fn atomic_phase_limits() {
        let line = AtomicLine::rb87_d2();
        let g = line.linewidth_hz;
        let far = atomic_phase(1e6 * g, 1e7, 800e-6, 500e-6, &line);
        assert!(far.phase.abs() < 1e-6);
        let plus = atomic_phase(3.0 * g, 1e7, 800e-6, 500e-6, &line);
        let minus = atomic_phase(-3.0 * g, 1e7, 800e-6, 500e-6, &line);
        assert_eq!(plus.phase, -minus.phase);
        // closed form ratio between δ = 5Γ and 10Γ: (10/101)/(20/401)
        let five = atomic_phase(5.0 * g, 1e7, 800e-6, 500e-6, &line).phase;
        let ten = atomic_phase(10.0 * g, 1e7, 800e-6, 500e-6, &line).phase;
        assert_relative_eq!(five / ten, (10.0 / 101.0) / (20.0 / 401.0), max_relative = 1e-14);
        let near = atomic_phase(0.5 * g, 1e8, 100e-6, 50e-6, &line);
        assert!(!near.small_phase);
    }

    #[test]
    fn snr_limits() {
        let s = detection_snr(1e6, 1e12, 1e6, 0.1);
        assert_relative_eq!(s, 1e3 * 0.1f64.sin(), max_relative = 1e-5);
        assert!((s - 99.8).abs() < 0.1);
        assert_eq!(detection_snr(1e6, 1e12, 1e6, 0.0), 0.0);
        assert_eq!(detection_snr(0.0, 0.0, 0.0, 0.3), 0.0);
        // N_c = N_e
        let (ns, nc) = (4e6f64, 1e8f64);
        let direct = (ns * nc).sqrt() / (ns + 2.0 * nc).sqrt() * 0.2f64.sin();
        assert_relative_eq!(detection_snr(ns, nc, nc, 0.2), direct, max_relative = 1e-15);
    }

    #[test]
    fn psd_is_affine_and_invertible() {
        let det = DetectorModel::paper_1ghz();
        assert_relative_eq!(det.gain(), 1466.0, max_relative = 1e-12);
        let floor = shot_noise_psd(&det, 0.0);
        assert_relative_eq!(floor, shot_noise_slope(&det) * det.electronic_noise_power, max_relative = 1e-15);
        // light at κ_e doubles the floor
        assert_relative_eq!(shot_noise_psd(&det, det.electronic_noise_power), 2.0 * floor, max_relative = 1e-15);
        let powers: Vec<f64> = (0..8).map(|i| i as f64 * 100e-6).collect();
        let psd: Vec<f64> = powers.iter().map(|&p| shot_noise_psd(&det, p)).collect();
        let line = fit_psd_line(&powers, &psd).unwrap();
        assert_relative_eq!(gain_from_slope(line.slope, 0.5, 50.0), 1466.0, max_relative = 1e-9);
        assert_relative_eq!(line.electronic_noise_power(), 165e-6, max_relative = 1e-9);
    }

    #[test]
    fn noiseless_sample_is_exact() {
        let det = DetectorModel {
            electronic_noise_power: 0.0,
            ..DetectorModel::paper_1ghz()
        };
        let p = ModulatedProbe {
            carrier_power: 0.0,
            ..probe()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_noisy_signal(1.25e-3, &det, &p, 1e-6, &mut rng).unwrap(), 1.25e-3);
        assert!(sample_noisy_signal(0.0, &det, &p, 0.0, &mut rng).is_err());
    }

    #[test]
    fn sample_variance_and_determinism() {
        let det = DetectorModel::paper_1ghz();
        let p = probe();
        let t = 1.25e-6;
        let sigma = noise_std(&det, &p, t);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| sample_noisy_signal(0.0, &det, &p, t, &mut rng).unwrap())
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.03);

        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let x = sample_noisy_signal(1.0, &det, &p, t, &mut a).unwrap();
            let y = sample_noisy_signal(1.0, &det, &p, t, &mut b).unwrap();
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    proptest::proptest! {
        #[test]
        fn snr_monotone(ns in 0.0f64..1e9, nc in 0.0f64..1e12, ne in 0.0f64..1e9, phi in 0.0f64..1.5, k in 1.0f64..10.0) {
            let base = detection_snr(ns, nc, ne, phi);
            proptest::prop_assert!(detection_snr(ns, nc * k, ne, phi) >= base * (1.0 - 1e-12));
            proptest::prop_assert!(detection_snr(ns * k, nc, ne, phi) >= base * (1.0 - 1e-12));
        }

        #[test]
        fn psd_affine(p1 in 0.0f64..1e-2, p2 in 0.0f64..1e-2) {
            let det = DetectorModel::paper_1ghz();
            let mid = shot_noise_psd(&det, 0.5 * (p1 + p2));
            let avg = 0.5 * (shot_noise_psd(&det, p1) + shot_noise_psd(&det, p2));
            proptest::prop_assert!((mid - avg).abs() <= 1e-12 * avg);
            proptest::prop_assert!(shot_noise_psd(&det, 0.0) >= 0.0);
        }
    }
}
