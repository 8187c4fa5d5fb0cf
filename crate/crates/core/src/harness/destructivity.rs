//! Scattering cost of a unit-SNR single-pulse measurement.

use serde::Serialize;

use super::HarnessError;
use crate::atoms::ClockProbe;
use crate::heterodyne::{
    atomic_phase, demodulated_signal, noise_std, AtomicLine, DetectorModel, MAX_MODULATION_DEPTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Destructivity {
    pub sideband_power: f64,
    pub modulation_depth: f64,
    pub snr: f64,
    /// Scattering events per atom caused by the probing sideband during one
    /// pulse.
    pub events_per_atom: f64,
    /// Same, including the carrier and the far sideband.
    pub events_per_atom_total: f64,
}

/// Peak demodulated signal of one pulse over the rms noise in its matched
/// bandwidth, for `atom_number` atoms in |F=2⟩.
pub fn single_pulse_snr(
    probe: &ClockProbe,
    detector: &DetectorModel,
    line: &AtomicLine,
    atom_number: f64,
    cloud_rms: f64,
    pulse_duration: f64,
) -> Result<f64, HarnessError> {
    let modulated = probe.modulated_probe();
    let phase = atomic_phase(probe.sideband_detuning_hz, atom_number, probe.waist, cloud_rms, line);
    let signal = demodulated_signal(&modulated, &modulated.phases(phase.phase), detector, None, 0.0)
        .map_err(|source| HarnessError::Regime { segment: 0, source })?;
    Ok(signal.abs() / noise_std(detector, &modulated, pulse_duration))
}

/// Find the sideband power giving SNR = 1 by bisection in log power, with the
/// modulation depth capped at the small-β limit.
pub fn destructivity_at_unit_snr(
    probe: &ClockProbe,
    detector: &DetectorModel,
    line: &AtomicLine,
    atom_number: f64,
    cloud_rms: f64,
    pulse_duration: f64,
) -> Result<Destructivity, HarnessError> {
    probe.validate()?;
    if !(pulse_duration > 0.0) || !(atom_number > 0.0) {
        return Err(HarnessError::InvalidSequence("pulse duration and atom number must be > 0".into()));
    }
    let at = |power: f64| {
        let p = ClockProbe {
            sideband_power: power,
            ..*probe
        };
        single_pulse_snr(&p, detector, line, atom_number, cloud_rms, pulse_duration).map(|snr| (p, snr))
    };
    let hi_power = (MAX_MODULATION_DEPTH * (1.0 - 1e-12)).powi(2) * probe.carrier_power;
    let mut hi = hi_power.ln();
    let mut lo = (hi_power * 1e-16).ln();
    let (_, snr_hi) = at(hi.exp())?;
    if snr_hi < 1.0 {
        return Err(HarnessError::Unreachable { best_snr: snr_hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid.exp())?.1 >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let (p, snr) = at(hi.exp())?;
    Ok(Destructivity {
        sideband_power: p.sideband_power,
        modulation_depth: p.modulated_probe().modulation_depth,
        snr,
        events_per_atom: p.f2_sideband_scattering_rate() * pulse_duration,
        events_per_atom_total: p.f2_scattering_rate() * pulse_duration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(detector: &DetectorModel) -> Destructivity {
        destructivity_at_unit_snr(
            &ClockProbe::rabi_probe(7.9),
            detector,
            &AtomicLine::rb87_d2(),
            1e7,
            500e-6,
            1.25e-6,
        )
        .unwrap()
    }

    #[test]
    fn unit_snr_is_found() {
        let d = run(&DetectorModel::paper_1ghz());
        assert!((d.snr - 1.0).abs() < 1e-9);
        assert!(d.events_per_atom > 0.0 && d.events_per_atom_total >= d.events_per_atom);
    }

    #[test]
    fn electronic_noise_costs_atoms() {
        let base = DetectorModel::paper_1ghz();
        let noisy = DetectorModel {
            electronic_noise_power: 2.0 * base.electronic_noise_power,
            ..base
        };
        let ideal = DetectorModel {
            electronic_noise_power: 0.0,
            ..base
        };
        let (b, n, i) = (run(&base), run(&noisy), run(&ideal));
        assert!(n.events_per_atom > b.events_per_atom);
        assert!(i.events_per_atom < b.events_per_atom);
    }
}
