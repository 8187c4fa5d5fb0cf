//! Simulation of heterodyne non-demolition detection of cold ⁸⁷Rb ensembles
//! in a folded 1560 nm dipole-trap cavity.
//!
//! * [`cavity`]: ABCD eigenmodes, transverse spectrum, finesse and build-up.
//! * [`trap`]: crossed-arm dipole potential, depth and trap frequencies.
//! * [`heterodyne`]: modulated probe, demodulation and detector noise.
//! * [`atoms`]: collective spin, scattering, light shifts and Bloch dynamics.
//! * [`harness`]: pulse sequences, traces and least-squares fits.

pub mod atoms;
pub mod cavity;
pub mod constants;
pub mod harness;
pub mod heterodyne;
pub mod trap;

pub use atoms::{ClockProbe, EnsembleState, ProbeTuning, RabiModel};
pub use cavity::{Axis, CavityError, CavityGeometry, GaussianMode};
pub use harness::{DetectionSetup, HarnessError, ProbeGate, PulseSequence, Segment, Trace};
pub use heterodyne::{AtomicLine, DetectorModel, HeterodyneError, ModulatedProbe, PhaseShiftTriple};
pub use trap::{DipoleTrapConfig, TrapError};
