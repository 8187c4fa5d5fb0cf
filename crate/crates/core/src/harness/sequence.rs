//! Timed microwave programs probed by a pulsed heterodyne beam.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::atoms::{evolve, light_shift, ClockProbe, Drive, EnsembleState, ProbeCoupling};
use crate::heterodyne::{atomic_phase, demodulated_signal, sample_noisy_signal, AtomicLine, DetectorModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Microwave {
        /// Ω_R (rad/s).
        rabi_frequency: f64,
        detuning_hz: f64,
        duration: f64,
        phase: f64,
    },
    /// Free precession in the frame of the preceding microwave pulse.
    FreeEvolution { duration: f64 },
}

impl Segment {
    pub fn duration(&self) -> f64 {
        match *self {
            Segment::Microwave { duration, .. } | Segment::FreeEvolution { duration } => duration,
        }
    }
}

/// Probe pulses of `pulse_duration` starting every 1/`repetition_rate`,
/// the first at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeGate {
    pub repetition_rate: f64,
    pub pulse_duration: f64,
}

impl ProbeGate {
    /// 1.25 µs pulses at 100 kHz.
    pub fn standard() -> Self {
        ProbeGate {
            repetition_rate: 1e5,
            pulse_duration: 1.25e-6,
        }
    }

    pub fn duty_cycle(&self) -> f64 {
        self.repetition_rate * self.pulse_duration
    }

    pub fn period(&self) -> f64 {
        1.0 / self.repetition_rate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub segments: Vec<Segment>,
    pub probe_gate: ProbeGate,
    /// Transverse damping during microwave pulses, β_shift + β_else (s⁻¹).
    pub drive_damping: f64,
    /// Transverse damping during free evolution (s⁻¹).
    pub free_damping: f64,
    pub max_duration: f64,
}

impl PulseSequence {
    pub const DEFAULT_MAX_DURATION: f64 = 0.1;

    pub fn new(segments: Vec<Segment>, probe_gate: ProbeGate) -> Self {
        PulseSequence {
            segments,
            probe_gate,
            drive_damping: 0.0,
            free_damping: 0.0,
            max_duration: Self::DEFAULT_MAX_DURATION,
        }
    }

    /// One continuous microwave pulse.
    pub fn rabi(rabi_frequency: f64, detuning_hz: f64, duration: f64, probe_gate: ProbeGate) -> Self {
        Self::new(
            vec![Segment::Microwave {
                rabi_frequency,
                detuning_hz,
                duration,
                phase: 0.0,
            }],
            probe_gate,
        )
    }

    /// π/2 − T − π − T − π/2 with equal gaps filling `total_duration`. When
    /// the pulses alone fill the total, the gaps are dropped.
    pub fn spin_echo(pi_duration: f64, detuning_hz: f64, total_duration: f64, probe_gate: ProbeGate) -> Self {
        let rabi_frequency = PI / pi_duration;
        let pulse = |duration: f64| Segment::Microwave {
            rabi_frequency,
            detuning_hz,
            duration,
            phase: 0.0,
        };
        let gap = 0.5 * (total_duration - 2.0 * pi_duration);
        let mut segments = vec![pulse(0.5 * pi_duration)];
        if gap > 0.0 {
            segments.push(Segment::FreeEvolution { duration: gap });
        }
        segments.push(pulse(pi_duration));
        if gap > 0.0 {
            segments.push(Segment::FreeEvolution { duration: gap });
        }
        segments.push(pulse(0.5 * pi_duration));
        Self::new(segments, probe_gate)
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(Segment::duration).sum()
    }

    pub fn sample_period(&self) -> f64 {
        self.probe_gate.period()
    }

    /// Start times of every segment plus the end of the sequence.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut t = 0.0;
        out.push(t);
        for s in &self.segments {
            t += s.duration();
            out.push(t);
        }
        out
    }

    /// Index of the longest microwave pulse (the refocusing pulse of an echo).
    pub fn central_pulse(&self) -> Option<usize> {
        self.segments
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Segment::Microwave { .. }))
            .max_by(|a, b| a.1.duration().total_cmp(&b.1.duration()))
            .map(|(i, _)| i)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let invalid = |msg: String| Err(HarnessError::InvalidSequence(msg));
        if self.segments.is_empty() {
            return invalid("no segments".into());
        }
        for (i, s) in self.segments.iter().enumerate() {
            if !(s.duration() > 0.0) {
                return invalid(format!("segment {i}: duration must be > 0"));
            }
            if let Segment::Microwave { rabi_frequency, .. } = s {
                if !(*rabi_frequency >= 0.0) {
                    return invalid(format!("segment {i}: rabi frequency must be >= 0"));
                }
            }
        }
        let total = self.total_duration();
        if !(total <= self.max_duration) {
            return invalid(format!("total duration {total} s exceeds {} s", self.max_duration));
        }
        let gate = self.probe_gate;
        if !(gate.repetition_rate > 0.0 && gate.pulse_duration > 0.0 && gate.duty_cycle() <= 1.0) {
            return invalid("probe gate needs positive rate and pulse with duty cycle <= 1".into());
        }
        if !(self.drive_damping >= 0.0 && self.free_damping >= 0.0) {
            return invalid("damping must be >= 0".into());
        }
        Ok(())
    }
}

/// How the probe's differential light shift enters the microwave detuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightShiftMode {
    /// Ignore the light shift.
    Off,
    /// Apply the instantaneous shift during each probe pulse.
    Gated,
    /// As `Gated`, with microwave detunings referenced to the duty-averaged
    /// shifted transition.
    Referenced,
}

/// Everything between the atoms and the recorded voltage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionSetup {
    pub probe: ClockProbe,
    pub detector: DetectorModel,
    pub line: AtomicLine,
    /// Fraction of |F=2,0⟩ scattering events ending in m_F≠0.
    pub leak_fraction: f64,
    pub light_shift: LightShiftMode,
    /// Apply probe-induced scattering to the atoms.
    pub back_action: bool,
    /// Add shot and electronic noise to the recorded signal.
    pub noise: bool,
}

impl DetectionSetup {
    pub fn new(probe: ClockProbe) -> Self {
        DetectionSetup {
            probe,
            detector: DetectorModel::paper_1ghz(),
            line: AtomicLine::rb87_d2(),
            leak_fraction: 0.5,
            light_shift: LightShiftMode::Gated,
            back_action: true,
            noise: true,
        }
    }

    /// Duty-averaged clock shift (Hz) for a gate.
    pub fn average_light_shift_hz(&self, gate: &ProbeGate) -> Result<f64, HarnessError> {
        Ok(light_shift(&self.probe, gate.duty_cycle())?.total_hz())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub seed: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub time: Vec<f64>,
    /// Recorded (noisy) demodulated voltage.
    pub signal: Vec<f64>,
    pub ideal_signal: Vec<f64>,
    pub f2_population: Vec<f64>,
    pub leaked: Vec<f64>,
    pub bloch: Vec<[f64; 3]>,
    pub metadata: TraceMetadata,
    pub final_state: EnsembleState,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Linear interpolation of the F=2 population at `t`.
    pub fn f2_population_at(&self, t: f64) -> f64 {
        interpolate(&self.time, &self.f2_population, t)
    }
}

fn interpolate(x: &[f64], y: &[f64], t: f64) -> f64 {
    match x.iter().position(|&xi| xi >= t) {
        None => *y.last().unwrap_or(&f64::NAN),
        Some(0) => y[0],
        Some(i) => {
            let w = (t - x[i - 1]) / (x[i] - x[i - 1]);
            y[i - 1] + w * (y[i] - y[i - 1])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Event {
    Boundary,
    Sample,
}

/// Step `initial` through `seq`, sampling the demodulated signal at the centre
/// of every probe pulse.
pub fn run_sequence(
    seq: &PulseSequence,
    initial: &EnsembleState,
    setup: &DetectionSetup,
    seed: u64,
    config_hash: &str,
) -> Result<Trace, HarnessError> {
    seq.validate()?;
    setup.probe.validate()?;
    setup.detector.validate().map_err(|source| HarnessError::Regime { segment: 0, source })?;
    initial.validate().map_err(|source| HarnessError::Step { segment: 0, source })?;
    let modulated = setup.probe.modulated_probe();
    modulated.validate().map_err(|source| HarnessError::Regime { segment: 0, source })?;

    let gate = seq.probe_gate;
    let total = seq.total_duration();
    let bounds = seq.boundaries();
    let reference_shift = match setup.light_shift {
        LightShiftMode::Referenced => setup.average_light_shift_hz(&gate)?,
        _ => 0.0,
    };
    let pulse_coupling = {
        let mut c = ProbeCoupling::from_clock_probe(&setup.probe, 1.0, setup.leak_fraction);
        if setup.light_shift == LightShiftMode::Off {
            c.light_shift_hz = 0.0;
        }
        if !setup.back_action {
            c.f2_scattering_rate = 0.0;
            c.f1_pumping_rate = 0.0;
        }
        c
    };
    let dark = ProbeCoupling::off();

    let mut events: Vec<(f64, Event)> = bounds.iter().map(|&t| (t, Event::Boundary)).collect();
    let period = gate.period();
    let mut k = 0u64;
    loop {
        let on = k as f64 * period;
        if on >= total {
            break;
        }
        let off = on + gate.pulse_duration;
        let mid = on + 0.5 * gate.pulse_duration;
        events.push((on, Event::Boundary));
        if off < total {
            events.push((off, Event::Boundary));
        }
        if mid <= total {
            events.push((mid, Event::Sample));
        }
        k += 1;
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let probe_on = |t: f64| (t / period).fract() * period < gate.pulse_duration;
    let segment_at = |t: f64| bounds[1..].iter().position(|&b| t < b).unwrap_or(seq.segments.len() - 1);
    let frame_detuning = |index: usize| {
        seq.segments[..=index]
            .iter()
            .rev()
            .chain(seq.segments[index + 1..].iter())
            .find_map(|s| match s {
                Segment::Microwave { detuning_hz, .. } => Some(*detuning_hz),
                _ => None,
            })
            .unwrap_or(0.0)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = *initial;
    let mut now = 0.0;
    let capacity = events.iter().filter(|e| e.1 == Event::Sample).count();
    let mut trace = Trace {
        time: Vec::with_capacity(capacity),
        signal: Vec::with_capacity(capacity),
        ideal_signal: Vec::with_capacity(capacity),
        f2_population: Vec::with_capacity(capacity),
        leaked: Vec::with_capacity(capacity),
        bloch: Vec::with_capacity(capacity),
        metadata: TraceMetadata {
            seed,
            config_hash: config_hash.to_string(),
        },
        final_state: state,
    };

    for (t, event) in events {
        if t > now {
            let mid = 0.5 * (now + t);
            let index = segment_at(mid);
            let drive = match seq.segments[index] {
                Segment::Microwave {
                    rabi_frequency,
                    detuning_hz,
                    phase,
                    ..
                } => Drive {
                    rabi_frequency,
                    detuning_hz: detuning_hz - reference_shift,
                    phase,
                    damping: seq.drive_damping,
                },
                Segment::FreeEvolution { .. } => Drive {
                    rabi_frequency: 0.0,
                    detuning_hz: frame_detuning(index) - reference_shift,
                    phase: 0.0,
                    damping: seq.free_damping,
                },
            };
            let coupling = if probe_on(mid) { &pulse_coupling } else { &dark };
            state = evolve(&state, &drive, coupling, t - now)
                .map_err(|source| HarnessError::Step { segment: index, source })?;
            now = t;
        }
        if event == Event::Sample {
            let index = segment_at(t.min(total * (1.0 - 1e-15)));
            let phase = atomic_phase(
                setup.probe.sideband_detuning_hz,
                state.detected_population(),
                setup.probe.waist,
                state.cloud_rms,
                &setup.line,
            );
            let ideal = demodulated_signal(&modulated, &modulated.phases(phase.phase), &setup.detector, None, 0.0)
                .map_err(|source| HarnessError::Regime { segment: index, source })?;
            let recorded = if setup.noise {
                sample_noisy_signal(ideal, &setup.detector, &modulated, gate.pulse_duration, &mut rng)
                    .map_err(|source| HarnessError::Regime { segment: index, source })?
            } else {
                ideal
            };
            trace.time.push(t);
            trace.signal.push(recorded);
            trace.ideal_signal.push(ideal);
            trace.f2_population.push(state.f2_population());
            trace.leaked.push(state.leaked);
            trace.bloch.push(state.bloch);
        }
    }
    trace.final_state = state;
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EchoAmplitude {
    pub detuning_hz: f64,
    /// P(mid π) − P(start of π), divided by the atom number.
    pub global: f64,
    /// Same difference divided by the trace's peak-to-peak F=2 population.
    pub per_trace: f64,
}

/// Signed F=2 excursion from the start to the middle of the refocusing pulse.
pub fn mid_pi_amplitude(seq: &PulseSequence, trace: &Trace, atom_number: f64) -> Result<EchoAmplitude, HarnessError> {
    let index = seq
        .central_pulse()
        .ok_or_else(|| HarnessError::InvalidSequence("no microwave pulse".into()))?;
    let (start, detuning) = match seq.segments[index] {
        Segment::Microwave { detuning_hz, .. } => (seq.boundaries()[index], detuning_hz),
        _ => unreachable!(),
    };
    if trace.is_empty() {
        return Err(HarnessError::InvalidSequence("empty trace".into()));
    }
    let mid = start + 0.5 * seq.segments[index].duration();
    let swing = trace.f2_population_at(mid) - trace.f2_population_at(start);
    let (lo, hi) = trace
        .f2_population
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    Ok(EchoAmplitude {
        detuning_hz: detuning,
        global: swing / atom_number,
        per_trace: if range > 0.0 { swing / range } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet(delta: f64) -> DetectionSetup {
        DetectionSetup {
            noise: false,
            back_action: false,
            light_shift: LightShiftMode::Off,
            ..DetectionSetup::new(ClockProbe::rabi_probe(delta))
        }
    }

    #[test]
    fn samples_sit_mid_pulse() {
        let seq = PulseSequence::rabi(2.0 * PI * 6.6e3, 0.0, 100e-6, ProbeGate::standard());
        let trace = run_sequence(&seq, &EnsembleState::ground(1e7), &quiet(7.9), 1, "x").unwrap();
        assert_eq!(trace.len(), 10);
        assert!((trace.time[0] - 0.625e-6).abs() < 1e-15);
        assert!((trace.time[9] - 90.625e-6).abs() < 1e-12);
    }

    #[test]
    fn undriven_ground_state_is_dark() {
        let seq = PulseSequence::rabi(0.0, 0.0, 200e-6, ProbeGate::standard());
        let setup = DetectionSetup {
            back_action: false,
            ..DetectionSetup::new(ClockProbe::rabi_probe(7.9))
        };
        let trace = run_sequence(&seq, &EnsembleState::ground(1e7), &setup, 4, "x").unwrap();
        assert!(trace.ideal_signal.iter().all(|&v| v == 0.0));
        let mean = trace.signal.iter().sum::<f64>() / trace.len() as f64;
        let sd = (trace.signal.iter().map(|v| v * v).sum::<f64>() / trace.len() as f64).sqrt();
        assert!(mean.abs() < 4.0 * sd / (trace.len() as f64).sqrt());
    }

    #[test]
    fn echo_without_gaps_is_two_pi() {
        let seq = PulseSequence::spin_echo(74.5e-6, 0.0, 149e-6, ProbeGate::standard());
        assert_eq!(seq.segments.len(), 3);
        let trace = run_sequence(&seq, &EnsembleState::ground(1e7), &quiet(7.9), 1, "x").unwrap();
        assert!(trace.final_state.f2_population().abs() < 1e-9 * 1e7);
    }

    #[test]
    fn deterministic_per_seed() {
        let seq = PulseSequence::rabi(2.0 * PI * 6.6e3, 0.0, 300e-6, ProbeGate::standard());
        let setup = DetectionSetup::new(ClockProbe::rabi_probe(7.9));
        let a = run_sequence(&seq, &EnsembleState::ground(1e7), &setup, 42, "h").unwrap();
        let b = run_sequence(&seq, &EnsembleState::ground(1e7), &setup, 42, "h").unwrap();
        let c = run_sequence(&seq, &EnsembleState::ground(1e7), &setup, 43, "h").unwrap();
        assert!(a.signal.iter().zip(&b.signal).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_ne!(a.signal, c.signal);
    }

    #[test]
    fn invalid_sequences() {
        let mut seq = PulseSequence::rabi(1.0, 0.0, 1e-3, ProbeGate::standard());
        seq.max_duration = 1e-4;
        assert!(seq.validate().is_err());
        let seq = PulseSequence::new(vec![Segment::FreeEvolution { duration: 0.0 }], ProbeGate::standard());
        assert!(seq.validate().is_err());
    }
}
