//! Scenario pipelines and their pre-run diagnostics.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use qndsim_core::atoms::{
    cavity_enhancement, damping_rate, light_shift, scattering_rate, squeezing_estimate, EnsembleState, ProbeTuning,
    RabiModel,
};
use qndsim_core::cavity::{
    backscatter_modulation, coupling_efficiency, finesse_from_reflectivity, intracavity_power, solve_mode,
    transverse_spectrum, Axis, CavityGeometry,
};
use qndsim_core::constants::{rb87, BOLTZMANN};
use qndsim_core::harness::{
    destructivity_at_unit_snr, fit_damped_sine, fit_exponential_samples, mid_pi_amplitude, run_sequence,
    DetectionSetup, PulseSequence,
};
use qndsim_core::heterodyne::{
    atomic_phase, fit_psd_line, gain_from_slope, pulse_bandwidth, shot_noise_psd, AtomicLine, MAX_MODULATION_DEPTH,
    MAX_SMALL_PHASE,
};
use qndsim_core::trap::{potential_at, trap_depth, trap_frequencies, DipoleTrapConfig};

use crate::config::{
    CavitySpectrumConfig, EnsembleConfig, NoiseSweepConfig, ProbeConfig, RabiConfig, ScatteringSweepConfig, Scenario,
    SpinEchoConfig, SqueezingConfig, TrapMapConfig,
};
use crate::CliError;

/// One file produced by a scenario, named relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub suffix: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub artifacts: Vec<Artifact>,
}

fn physics(context: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Physics(format!("{context}: {err}"))
}

struct Csv {
    text: String,
}

impl Csv {
    fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text }
    }

    fn row(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            write!(self.text, "{v}").expect("write to string");
        }
        self.text.push('\n');
    }

    fn artifact(self, suffix: &str) -> Artifact {
        Artifact {
            suffix: suffix.to_string(),
            contents: self.text,
        }
    }
}

fn json_artifact(suffix: &str, value: &Value) -> Artifact {
    let mut contents = serde_json::to_string_pretty(value).expect("json value serializes");
    contents.push('\n');
    Artifact {
        suffix: suffix.to_string(),
        contents,
    }
}

/// Independent stream per scenario index.
pub fn scenario_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn run_scenario(
    scenario: &Scenario,
    index: usize,
    seed: u64,
    config_hash: &str,
) -> Result<ScenarioOutput, CliError> {
    let mut rng = scenario_rng(seed, index);
    let mut meta = json!({
        "kind": scenario.kind(),
        "index": index,
        "seed": seed,
        "config_hash": config_hash,
    });
    if let Some(name) = scenario.name() {
        meta["name"] = json!(name);
    }
    match scenario {
        Scenario::CavitySpectrum(c) => cavity_spectrum(c, meta),
        Scenario::TrapMap(c) => trap_map(c, meta),
        Scenario::NoiseSweep(c) => noise_sweep(c, meta, &mut rng),
        Scenario::ScatteringSweep(c) => scattering_sweep(c, meta, &mut rng),
        Scenario::Rabi(c) => rabi(c, meta, &mut rng, config_hash),
        Scenario::SpinEcho(c) => spin_echo(c, meta, &mut rng, config_hash),
        Scenario::Squeezing(c) => squeezing(c, meta),
    }
}

fn cavity_spectrum(c: &CavitySpectrumConfig, mut meta: Value) -> Result<ScenarioOutput, CliError> {
    let geom = c.geometry();
    let mode = solve_mode(&geom).map_err(|e| physics("cavity", e))?;
    let spectrum = transverse_spectrum(&geom, c.m_max, c.n_max).map_err(|e| physics("cavity", e))?;
    let mut csv = Csv::new(&["m", "n", "offset_hz"]);
    for t in &spectrum {
        csv.row(&[t.m as f64, t.n as f64, t.offset_hz]);
    }
    let finesse = finesse_from_reflectivity(geom.amplitude_reflectivity).map_err(|e| physics("cavity", e))?;
    let buildup = intracavity_power(1.0, finesse, geom.loss_factor).map_err(|e| physics("cavity", e))?;
    let coupling = coupling_efficiency(geom.loss_factor).map_err(|e| physics("cavity", e))?;
    meta["results"] = json!({
        "free_spectral_range_hz": mode.free_spectral_range,
        "finesse": finesse,
        "linewidth_hz": mode.linewidth,
        "side_length_mm": geom.side_length() * 1e3,
        "waist_par_um": mode.parallel.waist * 1e6,
        "waist_perp_um": mode.perpendicular.waist * 1e6,
        "rayleigh_par_mm": mode.parallel.rayleigh_range * 1e3,
        "rayleigh_perp_mm": mode.perpendicular.rayleigh_range * 1e3,
        "gouy_par_rad": mode.parallel.gouy_phase,
        "gouy_perp_rad": mode.perpendicular.gouy_phase,
        "horizontal_spacing_hz": mode.mode_spacing(Axis::Parallel),
        "vertical_spacing_hz": mode.mode_spacing(Axis::Perpendicular),
        "intracavity_per_output_power": buildup,
        "coupling_efficiency": coupling,
    });
    Ok(ScenarioOutput {
        artifacts: vec![csv.artifact("spectrum.csv"), json_artifact("summary.json", &meta)],
    })
}

fn trap_config(c: &TrapMapConfig) -> Result<DipoleTrapConfig, CliError> {
    let mode = solve_mode(&CavityGeometry::paper_1560()).map_err(|e| physics("trap", e))?;
    Ok(DipoleTrapConfig {
        power_per_arm: c.power_per_arm_w,
        waist_parallel: c.waist_par_um.map_or(mode.parallel.waist, |w| w * 1e-6),
        waist_perpendicular: c.waist_perp_um.map_or(mode.perpendicular.waist, |w| w * 1e-6),
        wavelength: c.wavelength_nm * 1e-9,
        polarizability: c.polarizability_si,
        polarizability_ratio: c.polarizability_ratio,
        mass: rb87::MASS,
        backscatter_depth: backscatter_modulation(c.backscatter_intensity_ratio).map_err(|e| physics("trap", e))?,
    })
}

fn trap_map(c: &TrapMapConfig, mut meta: Value) -> Result<ScenarioOutput, CliError> {
    let trap = trap_config(c)?;
    trap.validate().map_err(|e| physics("trap", e))?;
    let depth = trap_depth(&trap);
    let freqs = trap_frequencies(&trap).map_err(|e| physics("trap", e))?;
    let to_uk = 1e6 / BOLTZMANN;
    let mut csv = Csv::new(&["x_um", "y_um", "z_um", "u_uk"]);
    let n = c.points.max(2);
    let coord = |i: usize| (-c.extent_um + 2.0 * c.extent_um * i as f64 / (n - 1) as f64) * 1e-6;
    for plane in 0..2 {
        for i in 0..n {
            for j in 0..n {
                let p = if plane == 0 {
                    [coord(i), coord(j), 0.0]
                } else {
                    [coord(i), 0.0, coord(j)]
                };
                csv.row(&[p[0] * 1e6, p[1] * 1e6, p[2] * 1e6, potential_at(&trap, p) * to_uk]);
            }
        }
    }
    meta["results"] = json!({
        "waist_par_um": trap.waist_parallel * 1e6,
        "waist_perp_um": trap.waist_perpendicular * 1e6,
        "backscatter_modulation": trap.backscatter_depth,
        "depth_crossing_uk": depth.crossing_microkelvin(),
        "depth_relative_to_arm_uk": depth.relative_microkelvin(),
        "trap_frequencies_hz": freqs,
    });
    Ok(ScenarioOutput {
        artifacts: vec![csv.artifact("potential.csv"), json_artifact("summary.json", &meta)],
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}

fn noise_sweep(c: &NoiseSweepConfig, mut meta: Value, rng: &mut ChaCha8Rng) -> Result<ScenarioOutput, CliError> {
    let det = c.detector.model();
    det.validate().map_err(|e| physics("detector", e))?;
    let bandwidth = pulse_bandwidth(c.sample_time_us * 1e-6);
    let powers = linspace(c.power_min_uw * 1e-6, c.power_max_uw * 1e-6, c.points);
    let mut csv = Csv::new(&["power_uw", "psd_model_w_per_hz", "psd_estimate_w_per_hz"]);
    let mut model = Vec::with_capacity(powers.len());
    let mut estimate = Vec::with_capacity(powers.len());
    for &p in &powers {
        let psd = shot_noise_psd(&det, p);
        let sigma = (psd * det.load * bandwidth).sqrt();
        let mut sum_sq = 0.0;
        for _ in 0..c.samples_per_point {
            let z: f64 = rng.sample(StandardNormal);
            sum_sq += (sigma * z).powi(2);
        }
        let est = sum_sq / c.samples_per_point.max(1) as f64 / (det.load * bandwidth);
        csv.row(&[p * 1e6, psd, est]);
        model.push(psd);
        estimate.push(est);
    }
    let exact = fit_psd_line(&powers, &model).map_err(|e| physics("noise sweep", e))?;
    let mc = fit_psd_line(&powers, &estimate).map_err(|e| physics("noise sweep", e))?;
    meta["results"] = json!({
        "gain_v_per_w": det.gain(),
        "model_fit": {
            "slope": exact.slope,
            "intercept": exact.intercept,
            "gain_v_per_w": gain_from_slope(exact.slope, det.sensitivity, det.load),
            "electronic_noise_power_uw": exact.electronic_noise_power() * 1e6,
        },
        "monte_carlo_fit": {
            "slope": mc.slope,
            "intercept": mc.intercept,
            "gain_v_per_w": gain_from_slope(mc.slope, det.sensitivity, det.load),
            "electronic_noise_power_uw": mc.electronic_noise_power() * 1e6,
        },
    });
    Ok(ScenarioOutput {
        artifacts: vec![csv.artifact("psd.csv"), json_artifact("summary.json", &meta)],
    })
}

fn pumping_tuning(c: &ScatteringSweepConfig, delta: f64) -> ProbeTuning {
    ProbeTuning::new(
        delta,
        c.carrier_detuning_mhz * 1e6,
        c.sideband_power_nw * 1e-9,
        c.carrier_power_uw * 1e-6,
        c.waist_um * 1e-6,
    )
}

fn scattering_sweep(
    c: &ScatteringSweepConfig,
    mut meta: Value,
    rng: &mut ChaCha8Rng,
) -> Result<ScenarioOutput, CliError> {
    let mut csv = Csv::new(&["delta_gamma", "gamma_s_hz", "gamma_c_hz", "gamma_exp_hz", "gamma_total_hz"]);
    for delta in linspace(c.delta_min_gamma, c.delta_max_gamma, c.points) {
        let t = pumping_tuning(c, delta);
        t.validate().map_err(|e| physics("scattering", e))?;
        let r = scattering_rate(&t, c.expansion_rate_hz);
        csv.row(&[delta, r.sideband, r.carrier, r.expansion, r.total()]);
    }
    let inset_rate = scattering_rate(&pumping_tuning(c, c.inset_delta_gamma), c.expansion_rate_hz);
    let tau = 1.0 / (PI * inset_rate.total());
    let mut inset = Csv::new(&["t_us", "signal"]);
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for t in linspace(0.0, 5.0 * tau, c.inset_points.max(4)) {
        let z: f64 = rng.sample(StandardNormal);
        let y = (-t / tau).exp() + c.inset_noise_fraction * z;
        inset.row(&[t * 1e6, y]);
        times.push(t);
        values.push(y);
    }
    let fit = fit_exponential_samples(&times, &values).map_err(|e| physics("inset fit", e))?;
    meta["results"] = json!({
        "inset_delta_gamma": c.inset_delta_gamma,
        "inset_rate": inset_rate,
        "inset_rate_total_hz": inset_rate.total(),
        "inset_fit": fit,
    });
    Ok(ScenarioOutput {
        artifacts: vec![
            csv.artifact("rates.csv"),
            inset.artifact("inset.csv"),
            json_artifact("summary.json", &meta),
        ],
    })
}

fn initial_state(e: &EnsembleConfig) -> EnsembleState {
    EnsembleState::ground(e.atom_number).with_cloud(e.temperature_uk * 1e-6, e.cloud_rms_um * 1e-6)
}

fn detection_setup(
    probe: &ProbeConfig,
    detector: &crate::config::DetectorConfig,
    ensemble: &EnsembleConfig,
    light_shift: crate::config::LightShiftSetting,
    back_action: bool,
    noise: bool,
) -> DetectionSetup {
    DetectionSetup {
        probe: probe.clock_probe(),
        detector: detector.model(),
        line: AtomicLine::rb87_d2(),
        leak_fraction: ensemble.leak_fraction,
        light_shift: light_shift.into(),
        back_action,
        noise,
    }
}

fn trace_csv(csv: &mut Csv, prefix: &[f64], trace: &qndsim_core::Trace, signal: &[f64]) {
    for i in 0..trace.len() {
        let b = trace.bloch[i];
        let mut row = prefix.to_vec();
        row.extend_from_slice(&[
            trace.time[i] * 1e6,
            signal[i],
            trace.ideal_signal[i],
            trace.f2_population[i],
            trace.leaked[i],
            b[0],
            b[1],
            b[2],
        ]);
        csv.row(&row);
    }
}

const TRACE_COLUMNS: [&str; 8] = ["t_us", "signal_v", "ideal_v", "f2_population", "leaked", "jx", "jy", "jz"];

fn rabi(c: &RabiConfig, mut meta: Value, rng: &mut ChaCha8Rng, hash: &str) -> Result<ScenarioOutput, CliError> {
    let setup = detection_setup(&c.probe, &c.detector, &c.ensemble, c.light_shift, c.back_action, c.noise);
    let gate = c.probe.gate();
    let shift = light_shift(&setup.probe, gate.duty_cycle()).map_err(|e| physics("probe", e))?;
    let model = RabiModel {
        rabi_frequency: c.rabi_frequency(),
        microwave_detuning_hz: c.microwave_detuning_hz,
        carrier_light_shift: shift.carrier_joules(),
        inhomogeneity: c.inhomogeneity,
        residual_damping: c.residual_damping_hz,
        repetition_rate: gate.repetition_rate,
        pulse_duration: gate.pulse_duration,
    };
    let spontaneous = if c.back_action {
        0.5 * gate.duty_cycle() * (setup.probe.f2_scattering_rate() + setup.probe.f1_pumping_rate())
    } else {
        0.0
    };
    let beta = damping_rate(&model, spontaneous).map_err(|e| physics("damping", e))?;
    let mut seq = PulseSequence::rabi(c.rabi_frequency(), c.microwave_detuning_hz, c.duration_us * 1e-6, gate);
    seq.drive_damping = beta.shift + beta.residual;
    let initial = initial_state(&c.ensemble);
    let trace = run_sequence(&seq, &initial, &setup, rng.next_u64(), hash).map_err(|e| physics("rabi", e))?;
    let fit = fit_damped_sine(&trace, Some(c.fit_window_us * 1e-6));
    let effective_detuning = match c.light_shift {
        crate::config::LightShiftSetting::Gated => c.microwave_detuning_hz + shift.total_hz(),
        _ => c.microwave_detuning_hz,
    };
    let generalized = (c.rabi_frequency().powi(2) + (2.0 * PI * effective_detuning).powi(2)).sqrt() / (2.0 * PI);
    let destructivity = destructivity_at_unit_snr(
        &setup.probe,
        &setup.detector,
        &setup.line,
        c.ensemble.atom_number,
        c.ensemble.cloud_rms_um * 1e-6,
        gate.pulse_duration,
    );
    let mut csv = Csv::new(&TRACE_COLUMNS);
    trace_csv(&mut csv, &[], &trace, &trace.signal);
    meta["results"] = json!({
        "light_shift_hz": shift,
        "expected_frequency_hz": generalized,
        "damping_model": {
            "spontaneous_hz": beta.spontaneous,
            "shift_hz": beta.shift,
            "residual_hz": beta.residual,
            "total_hz": beta.total(),
        },
        "fit": fit.as_ref().ok(),
        "fit_error": fit.as_ref().err().map(|e| e.to_string()),
        "destructivity": destructivity.as_ref().ok(),
        "destructivity_error": destructivity.as_ref().err().map(|e| e.to_string()),
        "final_state": trace.final_state,
    });
    Ok(ScenarioOutput {
        artifacts: vec![csv.artifact("trace.csv"), json_artifact("summary.json", &meta)],
    })
}

fn spin_echo(
    c: &SpinEchoConfig,
    mut meta: Value,
    rng: &mut ChaCha8Rng,
    hash: &str,
) -> Result<ScenarioOutput, CliError> {
    let setup = detection_setup(&c.probe, &c.detector, &c.ensemble, c.light_shift, c.back_action, c.noise);
    let gate = c.probe.gate();
    let initial = initial_state(&c.ensemble);
    let mut header = vec!["detuning_hz"];
    header.extend_from_slice(&TRACE_COLUMNS);
    let mut traces = Csv::new(&header);
    let mut amplitudes = Csv::new(&["detuning_hz", "amplitude_global", "amplitude_per_trace"]);
    let mut summary = Vec::new();
    let repetitions = c.repetitions.max(1);
    for &detuning in &c.detunings_hz {
        let mut seq =
            PulseSequence::spin_echo(c.pi_duration_us * 1e-6, detuning, c.total_duration_us * 1e-6, gate);
        seq.drive_damping = c.drive_damping_hz;
        let mut first = None;
        let mut averaged: Vec<f64> = Vec::new();
        for _ in 0..repetitions {
            let trace =
                run_sequence(&seq, &initial, &setup, rng.next_u64(), hash).map_err(|e| physics("spin echo", e))?;
            if averaged.is_empty() {
                averaged = vec![0.0; trace.len()];
            }
            for (a, s) in averaged.iter_mut().zip(&trace.signal) {
                *a += s / repetitions as f64;
            }
            first.get_or_insert(trace);
        }
        let trace = first.expect("at least one repetition");
        trace_csv(&mut traces, &[detuning], &trace, &averaged);
        let amp = mid_pi_amplitude(&seq, &trace, c.ensemble.atom_number).map_err(|e| physics("spin echo", e))?;
        amplitudes.row(&[detuning, amp.global, amp.per_trace]);
        summary.push(amp);
    }
    let shift = light_shift(&setup.probe, gate.duty_cycle()).map_err(|e| physics("probe", e))?;
    meta["results"] = json!({
        "gap_us": 0.5 * (c.total_duration_us - 2.0 * c.pi_duration_us),
        "light_shift_hz": shift,
        "amplitudes": summary,
    });
    Ok(ScenarioOutput {
        artifacts: vec![
            traces.artifact("traces.csv"),
            amplitudes.artifact("amplitudes.csv"),
            json_artifact("summary.json", &meta),
        ],
    })
}

fn squeezing(c: &SqueezingConfig, mut meta: Value) -> Result<ScenarioOutput, CliError> {
    let phase = match c.phase_per_atom_rad {
        Some(p) => p,
        None => atomic_phase(
            c.sideband_detuning_gamma * rb87::D2_LINEWIDTH_HZ,
            1.0,
            c.waist_um * 1e-6,
            c.cloud_rms_um * 1e-6,
            &AtomicLine::rb87_d2(),
        )
        .phase
        .abs(),
    };
    let mut csv = Csv::new(&["sideband_photons", "kappa_squared", "xi_squared", "xi_squared_db"]);
    for n in logspace(c.photons_min, c.photons_max, c.points) {
        let s = squeezing_estimate(phase, c.atom_number, n).map_err(|e| physics("squeezing", e))?;
        csv.row(&[n, s.kappa_squared, s.xi_squared, 10.0 * s.xi_squared.log10()]);
    }
    let enhancement: Result<Vec<Value>, CliError> = c
        .finesse
        .iter()
        .map(|&f| {
            cavity_enhancement(f, 1.0)
                .map(|g| json!({"finesse": f, "snr_gain": g}))
                .map_err(|e| physics("squeezing", e))
        })
        .collect();
    meta["results"] = json!({
        "phase_per_atom_rad": phase,
        "cavity_enhancement": enhancement?,
    });
    Ok(ScenarioOutput {
        artifacts: vec![csv.artifact("squeezing.csv"), json_artifact("summary.json", &meta)],
    })
}

/// A pre-run finding tied to a config path.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

fn probe_diagnostics(
    out: &mut Vec<Diagnostic>,
    base: &str,
    probe: &ProbeConfig,
    ensemble: &EnsembleConfig,
    detector: &crate::config::DetectorConfig,
) {
    let mut push = |field: &str, message: String| {
        out.push(Diagnostic {
            path: format!("{base}.{field}"),
            message,
        })
    };
    let clock = probe.clock_probe();
    let beta = (clock.sideband_power / clock.carrier_power).sqrt();
    if !(beta <= MAX_MODULATION_DEPTH) {
        push(
            &format!("probe.{}", probe.depth_field()),
            format!("modulation depth {beta} outside the small-modulation regime (<= {MAX_MODULATION_DEPTH})"),
        );
    }
    if !(probe.ram_asymmetry.abs() < 1.0) {
        push("probe.ram_asymmetry", format!("|{}| must be < 1", probe.ram_asymmetry));
    }
    if let Err(e) = clock.validate() {
        push("probe", e.to_string());
    }
    let duty = probe.gate().duty_cycle();
    if !(probe.pulse_duration_us > 0.0 && probe.repetition_rate_khz > 0.0 && duty <= 1.0) {
        push("probe.pulse_duration_us", format!("pulse and rate must be > 0 with duty cycle {duty} <= 1"));
    }
    if let Err(e) = detector.model().validate() {
        push("detector", e.to_string());
    }
    if !(ensemble.atom_number > 0.0) {
        push("ensemble.atom_number", "must be > 0".into());
    }
    if !(ensemble.cloud_rms_um >= 0.0) {
        push("ensemble.cloud_rms_um", "must be >= 0".into());
    }
    if !(0.0..=1.0).contains(&ensemble.leak_fraction) {
        push("ensemble.leak_fraction", "must lie in [0, 1]".into());
    }
    if clock.waist > 0.0 {
        let phase = atomic_phase(
            clock.sideband_detuning_hz,
            ensemble.atom_number,
            clock.waist,
            ensemble.cloud_rms_um * 1e-6,
            &AtomicLine::rb87_d2(),
        );
        if !(phase.phase.abs() <= MAX_SMALL_PHASE) {
            push(
                "ensemble.atom_number",
                format!(
                    "atomic phase {} rad outside the small-phase regime (<= {MAX_SMALL_PHASE})",
                    phase.phase
                ),
            );
        }
    }
}

/// Schema-valid but physically out-of-regime settings.
pub fn diagnose(scenario: &Scenario, index: usize) -> Vec<Diagnostic> {
    let base = format!("scenarios.{index}");
    let mut out = Vec::new();
    let mut push = |field: &str, message: String| {
        out.push(Diagnostic {
            path: format!("{base}.{field}"),
            message,
        })
    };
    match scenario {
        Scenario::CavitySpectrum(c) => {
            if let Err(e) = c.geometry().validate() {
                push("geometry", e.to_string());
            } else if let Err(e) = solve_mode(&c.geometry()) {
                push("geometry", e.to_string());
            }
        }
        Scenario::TrapMap(c) => match trap_config(c) {
            Ok(t) => {
                if let Err(e) = t.validate() {
                    push("power_per_arm_w", e.to_string());
                }
            }
            Err(e) => push("backscatter_intensity_ratio", e.to_string()),
        },
        Scenario::NoiseSweep(c) => {
            if let Err(e) = c.detector.model().validate() {
                push("detector", e.to_string());
            }
            if c.points < 2 || !(c.power_max_uw > c.power_min_uw) || !(c.power_min_uw >= 0.0) {
                push("points", "need at least 2 distinct non-negative powers".into());
            }
            if c.samples_per_point < 2 {
                push("samples_per_point", "must be >= 2".into());
            }
            if !(c.sample_time_us > 0.0) {
                push("sample_time_us", "must be > 0".into());
            }
        }
        Scenario::ScatteringSweep(c) => {
            if let Err(e) = pumping_tuning(c, c.delta_min_gamma).validate() {
                push("waist_um", e.to_string());
            }
            if !(c.waist_um > 0.0) {
                push("waist_um", "must be > 0".into());
            }
            if c.points == 0 {
                push("points", "must be >= 1".into());
            }
            if !(c.inset_noise_fraction >= 0.0) {
                push("inset_noise_fraction", "must be >= 0".into());
            }
        }
        Scenario::Rabi(c) => {
            probe_diagnostics(&mut out, &base, &c.probe, &c.ensemble, &c.detector);
            let mut push = |field: &str, message: String| {
                out.push(Diagnostic {
                    path: format!("{base}.{field}"),
                    message,
                })
            };
            if !(c.duration_us > 0.0) {
                push("duration_us", "must be > 0".into());
            } else if !(c.duration_us * 1e-6 <= PulseSequence::DEFAULT_MAX_DURATION) {
                push("duration_us", "exceeds the 0.1 s sequence limit".into());
            }
            if !(c.fit_window_us > 0.0) {
                push("fit_window_us", "must be > 0".into());
            }
            if !(c.rabi_frequency_khz >= 0.0) {
                push("rabi_frequency_khz", "must be >= 0".into());
            }
            if !(c.inhomogeneity >= 0.0) {
                push("inhomogeneity", "must be >= 0".into());
            }
            if !(c.residual_damping_hz >= 0.0) {
                push("residual_damping_hz", "must be >= 0".into());
            }
        }
        Scenario::SpinEcho(c) => {
            probe_diagnostics(&mut out, &base, &c.probe, &c.ensemble, &c.detector);
            let mut push = |field: &str, message: String| {
                out.push(Diagnostic {
                    path: format!("{base}.{field}"),
                    message,
                })
            };
            if !(c.pi_duration_us > 0.0) {
                push("pi_duration_us", "must be > 0".into());
            }
            if !(c.total_duration_us >= 2.0 * c.pi_duration_us) {
                push("total_duration_us", "must cover the three pulses".into());
            } else if !(c.total_duration_us * 1e-6 <= PulseSequence::DEFAULT_MAX_DURATION) {
                push("total_duration_us", "exceeds the 0.1 s sequence limit".into());
            }
            if !(c.drive_damping_hz >= 0.0) {
                push("drive_damping_hz", "must be >= 0".into());
            }
        }
        Scenario::Squeezing(c) => {
            if !(c.atom_number >= 0.0) {
                push("atom_number", "must be >= 0".into());
            }
            if !(c.photons_min > 0.0 && c.photons_max >= c.photons_min) {
                push("photons_min", "need 0 < photons_min <= photons_max".into());
            }
            if c.finesse.iter().any(|&f| !(f >= 1.0)) {
                push("finesse", "every finesse must be >= 1".into());
            }
            if !(c.waist_um > 0.0) {
                push("waist_um", "must be > 0".into());
            }
        }
    }
    out
}
