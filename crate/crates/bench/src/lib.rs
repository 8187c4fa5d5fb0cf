//! Shared fixtures for the benchmarks.

use qndsim_core::{ClockProbe, DetectionSetup, EnsembleState, ProbeGate, PulseSequence};

pub const RABI_OMEGA: f64 = 2.0 * std::f64::consts::PI * 6.6e3;

pub fn rabi_fixture(duration: f64) -> (PulseSequence, EnsembleState, DetectionSetup) {
    let mut seq = PulseSequence::rabi(RABI_OMEGA, 0.0, duration, ProbeGate::standard());
    seq.drive_damping = 250.0;
    (seq, EnsembleState::ground(1e7), DetectionSetup::new(ClockProbe::rabi_probe(7.9)))
}

pub fn echo_fixture(detuning_hz: f64) -> (PulseSequence, EnsembleState, DetectionSetup) {
    let seq = PulseSequence::spin_echo(74.5e-6, detuning_hz, 500e-6, ProbeGate::standard());
    (seq, EnsembleState::ground(1e7), DetectionSetup::new(ClockProbe::rabi_probe(7.9)))
}
