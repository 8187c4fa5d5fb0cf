//! Simulated experiments: pulse programs, traces and their fits.

pub mod destructivity;
pub mod fit;
pub mod sequence;

use thiserror::Error;

use crate::atoms::{AtomsError, StepError};
use crate::heterodyne::HeterodyneError;

pub use destructivity::{destructivity_at_unit_snr, single_pulse_snr, Destructivity};
pub use fit::{
    damped_sine, fit_damped_sine_samples, fit_exponential_samples, gamma_from_tau, DampedSineFit, ExponentialFit,
    FitError,
};
pub use sequence::{
    mid_pi_amplitude, run_sequence, DetectionSetup, EchoAmplitude, LightShiftMode, ProbeGate, PulseSequence,
    Segment, Trace, TraceMetadata,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("segment {segment}: {source}")]
    Step {
        segment: usize,
        #[source]
        source: StepError,
    },
    #[error("segment {segment}: {source}")]
    Regime {
        segment: usize,
        #[source]
        source: HeterodyneError,
    },
    #[error(transparent)]
    Atoms(#[from] AtomsError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("SNR = 1 not reachable within the small-modulation limit (best {best_snr})")]
    Unreachable { best_snr: f64 },
}

/// Fit the first `window` seconds of a trace's recorded signal.
pub fn fit_damped_sine(trace: &Trace, window: Option<f64>) -> Result<DampedSineFit, FitError> {
    fit_damped_sine_samples(&trace.time, &trace.signal, window)
}

/// Exponential fit of a trace's recorded signal.
pub fn fit_exponential(trace: &Trace) -> Result<ExponentialFit, FitError> {
    fit_exponential_samples(&trace.time, &trace.signal)
}
