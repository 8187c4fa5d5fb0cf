//! Experiment configuration: JSON with unit-suffixed field names.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use qndsim_core::atoms::ClockProbe;
use qndsim_core::cavity::CavityGeometry;
use qndsim_core::constants::{rb87, SPEED_OF_LIGHT};
use qndsim_core::harness::{LightShiftMode, ProbeGate};
use qndsim_core::heterodyne::DetectorModel;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    CavitySpectrum(CavitySpectrumConfig),
    TrapMap(TrapMapConfig),
    NoiseSweep(NoiseSweepConfig),
    ScatteringSweep(ScatteringSweepConfig),
    Rabi(RabiConfig),
    SpinEcho(SpinEchoConfig),
    Squeezing(SqueezingConfig),
}

impl Scenario {
    pub const KINDS: [(&'static str, &'static str); 7] = [
        ("cavity-spectrum", "transverse-mode spectrum, waists and finesse of the folded cavity"),
        ("trap-map", "crossed-arm dipole potential maps, depth and trap frequencies"),
        ("noise-sweep", "detector noise PSD versus optical power with gain and floor recovery"),
        ("scattering-sweep", "probe-induced pumping rate versus sideband detuning"),
        ("rabi", "probed Rabi oscillation trace with damped-sine fit"),
        ("spin-echo", "probed pi/2-pi-pi/2 sequences over a set of microwave detunings"),
        ("squeezing", "measurement strength and squeezing estimate versus photon number"),
    ];

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::CavitySpectrum(_) => "cavity-spectrum",
            Scenario::TrapMap(_) => "trap-map",
            Scenario::NoiseSweep(_) => "noise-sweep",
            Scenario::ScatteringSweep(_) => "scattering-sweep",
            Scenario::Rabi(_) => "rabi",
            Scenario::SpinEcho(_) => "spin-echo",
            Scenario::Squeezing(_) => "squeezing",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Scenario::CavitySpectrum(c) => c.name.as_deref(),
            Scenario::TrapMap(c) => c.name.as_deref(),
            Scenario::NoiseSweep(c) => c.name.as_deref(),
            Scenario::ScatteringSweep(c) => c.name.as_deref(),
            Scenario::Rabi(c) => c.name.as_deref(),
            Scenario::SpinEcho(c) => c.name.as_deref(),
            Scenario::Squeezing(c) => c.name.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavitySpectrumConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub round_trip_length_mm: f64,
    pub crossing_arm_length_mm: f64,
    pub mirror_radius_mm: f64,
    pub incidence_angle_deg: f64,
    pub alpha_par: f64,
    pub reflectivity: f64,
    pub loss_factor: f64,
    pub wavelength_nm: f64,
    pub m_max: u32,
    pub n_max: u32,
}

impl Default for CavitySpectrumConfig {
    fn default() -> Self {
        CavitySpectrumConfig {
            name: None,
            description: None,
            round_trip_length_mm: SPEED_OF_LIGHT / CavityGeometry::PAPER_FSR_HZ * 1e3,
            crossing_arm_length_mm: 90.0,
            mirror_radius_mm: 100.0,
            incidence_angle_deg: 22.5,
            alpha_par: 1.02,
            reflectivity: 0.99956,
            loss_factor: 1.5,
            wavelength_nm: 1560.0,
            m_max: 10,
            n_max: 10,
        }
    }
}

impl CavitySpectrumConfig {
    pub fn geometry(&self) -> CavityGeometry {
        CavityGeometry {
            round_trip_length: self.round_trip_length_mm * 1e-3,
            crossing_arm_length: self.crossing_arm_length_mm * 1e-3,
            mirror_radius: self.mirror_radius_mm * 1e-3,
            incidence_angle: self.incidence_angle_deg.to_radians(),
            astigmatism_correction: self.alpha_par,
            amplitude_reflectivity: self.reflectivity,
            loss_factor: self.loss_factor,
            wavelength: self.wavelength_nm * 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrapMapConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub power_per_arm_w: f64,
    /// Taken from the default cavity eigenmode when absent.
    pub waist_par_um: Option<f64>,
    pub waist_perp_um: Option<f64>,
    pub wavelength_nm: f64,
    pub polarizability_si: f64,
    pub polarizability_ratio: f64,
    /// Back-scattered to forward intensity ratio.
    pub backscatter_intensity_ratio: f64,
    pub extent_um: f64,
    pub points: usize,
}

impl Default for TrapMapConfig {
    fn default() -> Self {
        TrapMapConfig {
            name: None,
            description: None,
            power_per_arm_w: 200.0,
            waist_par_um: None,
            waist_perp_um: None,
            wavelength_nm: 1560.0,
            polarizability_si: rb87::POLARIZABILITY_1560,
            polarizability_ratio: rb87::POLARIZABILITY_RATIO_1560,
            backscatter_intensity_ratio: 0.0,
            extent_um: 300.0,
            points: 61,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub sensitivity_a_per_w: f64,
    pub transimpedance_ohm: f64,
    pub buffer_gain: f64,
    pub load_ohm: f64,
    pub bandwidth_hz: f64,
    pub electronic_noise_power_uw: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self::from_model(&DetectorModel::paper_1ghz())
    }
}

impl DetectorConfig {
    pub fn from_model(m: &DetectorModel) -> Self {
        DetectorConfig {
            sensitivity_a_per_w: m.sensitivity,
            transimpedance_ohm: m.transimpedance,
            buffer_gain: m.buffer_gain,
            load_ohm: m.load,
            bandwidth_hz: m.bandwidth,
            electronic_noise_power_uw: m.electronic_noise_power * 1e6,
        }
    }

    pub fn model(&self) -> DetectorModel {
        DetectorModel {
            sensitivity: self.sensitivity_a_per_w,
            transimpedance: self.transimpedance_ohm,
            buffer_gain: self.buffer_gain,
            load: self.load_ohm,
            bandwidth: self.bandwidth_hz,
            electronic_noise_power: self.electronic_noise_power_uw * 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSweepConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub detector: DetectorConfig,
    pub power_min_uw: f64,
    pub power_max_uw: f64,
    pub points: usize,
    /// Noise samples per power used for the Monte Carlo PSD estimate.
    pub samples_per_point: usize,
    /// Averaging time of one noise sample.
    pub sample_time_us: f64,
}

impl Default for NoiseSweepConfig {
    fn default() -> Self {
        NoiseSweepConfig {
            name: None,
            description: None,
            detector: DetectorConfig::default(),
            power_min_uw: 0.0,
            power_max_uw: 1000.0,
            points: 21,
            samples_per_point: 4000,
            sample_time_us: 1.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteringSweepConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub delta_min_gamma: f64,
    pub delta_max_gamma: f64,
    pub points: usize,
    pub waist_um: f64,
    pub carrier_power_uw: f64,
    pub sideband_power_nw: f64,
    pub carrier_detuning_mhz: f64,
    pub expansion_rate_hz: f64,
    /// Detuning of the simulated decay trace that is fitted with γ = 1/(πτ).
    pub inset_delta_gamma: f64,
    /// Relative rms noise on the simulated decay trace.
    pub inset_noise_fraction: f64,
    pub inset_points: usize,
}

impl Default for ScatteringSweepConfig {
    fn default() -> Self {
        ScatteringSweepConfig {
            name: None,
            description: None,
            delta_min_gamma: 0.5,
            delta_max_gamma: 12.0,
            points: 47,
            waist_um: 245.0,
            carrier_power_uw: 120.0,
            sideband_power_nw: 76.0,
            carrier_detuning_mhz: 2808.0,
            expansion_rate_hz: 120.0,
            inset_delta_gamma: 4.81,
            inset_noise_fraction: 0.02,
            inset_points: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    /// Probing (lower) sideband above F=2 → F'=3, in linewidths.
    pub sideband_detuning_gamma: f64,
    pub carrier_power_uw: f64,
    /// Power per sideband; ignored when `modulation_depth` is given.
    pub sideband_power_nw: f64,
    pub modulation_depth: Option<f64>,
    pub waist_um: f64,
    /// Carrier above F=2 → F'=3.
    pub carrier_detuning_mhz: f64,
    pub ram_asymmetry: f64,
    pub path_length_m: f64,
    pub repetition_rate_khz: f64,
    pub pulse_duration_us: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            sideband_detuning_gamma: 7.9,
            carrier_power_uw: 70.0,
            sideband_power_nw: 90.0,
            modulation_depth: None,
            waist_um: 800.0,
            carrier_detuning_mhz: 2500.0,
            ram_asymmetry: 0.01,
            path_length_m: 1.0,
            repetition_rate_khz: 100.0,
            pulse_duration_us: 1.25,
        }
    }
}

impl ProbeConfig {
    pub fn sideband_power(&self) -> f64 {
        match self.modulation_depth {
            Some(beta) => beta * beta * self.carrier_power_uw * 1e-6,
            None => self.sideband_power_nw * 1e-9,
        }
    }

    /// Field that sets the modulation depth, for diagnostics.
    pub fn depth_field(&self) -> &'static str {
        if self.modulation_depth.is_some() {
            "modulation_depth"
        } else {
            "sideband_power_nw"
        }
    }

    pub fn clock_probe(&self) -> ClockProbe {
        ClockProbe {
            carrier_power: self.carrier_power_uw * 1e-6,
            sideband_power: self.sideband_power(),
            waist: self.waist_um * 1e-6,
            carrier_detuning_hz: self.carrier_detuning_mhz * 1e6,
            sideband_detuning_hz: self.sideband_detuning_gamma * rb87::D2_LINEWIDTH_HZ,
            ram_asymmetry: self.ram_asymmetry,
            path_length: self.path_length_m,
            linewidth_hz: rb87::D2_LINEWIDTH_HZ,
        }
    }

    pub fn gate(&self) -> ProbeGate {
        ProbeGate {
            repetition_rate: self.repetition_rate_khz * 1e3,
            pulse_duration: self.pulse_duration_us * 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightShiftSetting {
    Off,
    Gated,
    Referenced,
}

impl From<LightShiftSetting> for LightShiftMode {
    fn from(s: LightShiftSetting) -> Self {
        match s {
            LightShiftSetting::Off => LightShiftMode::Off,
            LightShiftSetting::Gated => LightShiftMode::Gated,
            LightShiftSetting::Referenced => LightShiftMode::Referenced,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub atom_number: f64,
    pub cloud_rms_um: f64,
    pub temperature_uk: f64,
    /// Fraction of |F=2,0⟩ scattering events ending in m_F≠0.
    pub leak_fraction: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            atom_number: 1e7,
            cloud_rms_um: 500.0,
            temperature_uk: 80.0,
            leak_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RabiConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub ensemble: EnsembleConfig,
    pub probe: ProbeConfig,
    pub detector: DetectorConfig,
    pub rabi_frequency_khz: f64,
    pub microwave_detuning_hz: f64,
    pub duration_us: f64,
    pub fit_window_us: f64,
    /// Light-shift inhomogeneity factor α.
    pub inhomogeneity: f64,
    pub residual_damping_hz: f64,
    pub light_shift: LightShiftSetting,
    pub back_action: bool,
    pub noise: bool,
}

impl Default for RabiConfig {
    fn default() -> Self {
        RabiConfig {
            name: None,
            description: None,
            ensemble: EnsembleConfig::default(),
            probe: ProbeConfig::default(),
            detector: DetectorConfig::default(),
            rabi_frequency_khz: 6.6,
            microwave_detuning_hz: 0.0,
            duration_us: 2000.0,
            fit_window_us: 800.0,
            inhomogeneity: 0.162,
            residual_damping_hz: 90.0,
            light_shift: LightShiftSetting::Gated,
            back_action: true,
            noise: true,
        }
    }
}

impl RabiConfig {
    pub fn rabi_frequency(&self) -> f64 {
        2.0 * PI * self.rabi_frequency_khz * 1e3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinEchoConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub ensemble: EnsembleConfig,
    pub probe: ProbeConfig,
    pub detector: DetectorConfig,
    pub pi_duration_us: f64,
    pub total_duration_us: f64,
    pub detunings_hz: Vec<f64>,
    /// Noisy repetitions averaged per detuning.
    pub repetitions: usize,
    pub drive_damping_hz: f64,
    pub light_shift: LightShiftSetting,
    pub back_action: bool,
    pub noise: bool,
}

impl Default for SpinEchoConfig {
    fn default() -> Self {
        SpinEchoConfig {
            name: None,
            description: None,
            ensemble: EnsembleConfig::default(),
            probe: ProbeConfig::default(),
            detector: DetectorConfig::default(),
            pi_duration_us: 74.5,
            total_duration_us: 500.0,
            detunings_hz: vec![0.0, 1000.0, 1200.0, 1800.0],
            repetitions: 3,
            drive_damping_hz: 0.0,
            light_shift: LightShiftSetting::Referenced,
            back_action: true,
            noise: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SqueezingConfig {
    pub name: Option<String>,
    pub description: Option<String>,
    pub atom_number: f64,
    /// Single-atom phase; derived from the probe and cloud when absent.
    pub phase_per_atom_rad: Option<f64>,
    pub sideband_detuning_gamma: f64,
    pub waist_um: f64,
    pub cloud_rms_um: f64,
    pub photons_min: f64,
    pub photons_max: f64,
    pub points: usize,
    pub finesse: Vec<f64>,
}

impl Default for SqueezingConfig {
    fn default() -> Self {
        SqueezingConfig {
            name: None,
            description: None,
            atom_number: 1e7,
            phase_per_atom_rad: None,
            sideband_detuning_gamma: 7.9,
            waist_um: 800.0,
            cloud_rms_um: 500.0,
            photons_min: 1e3,
            photons_max: 1e9,
            points: 25,
            finesse: vec![1.0, 1788.0, 102000.0],
        }
    }
}

/// Parse `key=value` where key is a dotted path such as `scenarios.0.alpha_par`.
/// The value is read as JSON, falling back to a plain string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got '{assignment}'")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (depth, part) in parts.iter().enumerate() {
        let last = depth + 1 == parts.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert((*part).to_string(), value);
                    return Ok(());
                }
                map.entry((*part).to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let index: usize = part
                    .parse()
                    .map_err(|_| CliError::Config(format!("--set {path}: '{part}' is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(index)
                    .ok_or_else(|| CliError::Config(format!("--set {path}: index {index} out of range ({len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(CliError::Config(format!("--set {path}: '{part}' is not inside an object or array"))),
        };
    }
    Err(CliError::Config(format!("--set {path}: empty path")))
}

/// Read, override and deserialize a configuration file.
pub fn load(path: &Path, overrides: &[String]) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, overrides).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str, overrides: &[String]) -> Result<ExperimentConfig, CliError> {
    let mut root: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    // Scenarios are decoded one by one: the tagged enum would hide the field
    // path of any error inside a scenario.
    let raw = match root.as_object_mut().and_then(|m| m.remove("scenarios")) {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items,
        Some(_) => return Err(CliError::Config("at 'scenarios': expected an array".into())),
    };
    let mut config: ExperimentConfig = decode(root, "")?;
    config.scenarios = raw
        .into_iter()
        .enumerate()
        .map(|(i, v)| decode_scenario(v, &format!("scenarios[{i}]")))
        .collect::<Result<_, _>>()?;
    if config.schema_version != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "at 'schema_version': unsupported version {} (expected {SCHEMA_VERSION})",
            config.schema_version
        )));
    }
    Ok(config)
}

fn decode<T: serde::de::DeserializeOwned>(value: Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, _) => inner.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        CliError::Config(format!("at '{path}': {}", e.into_inner()))
    })
}

fn decode_scenario(mut value: Value, path: &str) -> Result<Scenario, CliError> {
    let map = value
        .as_object_mut()
        .ok_or_else(|| CliError::Config(format!("at '{path}': expected an object")))?;
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(CliError::Config(format!("at '{path}.kind': expected a string"))),
        None => return Err(CliError::Config(format!("at '{path}': missing field `kind`"))),
    };
    Ok(match kind.as_str() {
        "cavity-spectrum" => Scenario::CavitySpectrum(decode(value, path)?),
        "trap-map" => Scenario::TrapMap(decode(value, path)?),
        "noise-sweep" => Scenario::NoiseSweep(decode(value, path)?),
        "scattering-sweep" => Scenario::ScatteringSweep(decode(value, path)?),
        "rabi" => Scenario::Rabi(decode(value, path)?),
        "spin-echo" => Scenario::SpinEcho(decode(value, path)?),
        "squeezing" => Scenario::Squeezing(decode(value, path)?),
        other => {
            let known: Vec<&str> = Scenario::KINDS.iter().map(|k| k.0).collect();
            return Err(CliError::Config(format!(
                "at '{path}.kind': unknown scenario `{other}`, expected one of {}",
                known.join(", ")
            )));
        }
    })
}

fn strip_non_physics(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("description");
            map.remove("name");
            for v in map.values_mut() {
                strip_non_physics(v);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(strip_non_physics),
        _ => {}
    }
}

/// SHA-256 of the canonical physics content: defaults filled in, keys
/// sorted, and seed, output directory, names and descriptions removed.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let mut value = serde_json::to_value(config).expect("config serializes");
    if let Value::Object(map) = &mut value {
        map.remove("seed");
        map.remove("output_dir");
    }
    strip_non_physics(&mut value);
    let canonical = serde_json::to_string(&value).expect("value serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"schema_version": 1, "scenarios": [{"kind": "cavity-spectrum"}]}"#;

    #[test]
    fn defaults_fill_in() {
        let c = parse(MINIMAL, &[]).unwrap();
        assert_eq!(c.scenarios[0], Scenario::CavitySpectrum(CavitySpectrumConfig::default()));
    }

    #[test]
    fn unknown_field_reports_path() {
        let text = r#"{"schema_version": 1, "scenarios": [{"kind": "rabi", "probe": {"waist": 3}}]}"#;
        let err = parse(text, &[]).unwrap_err().to_string();
        assert!(err.contains("at 'scenarios[0].probe.waist'"), "{err}");
        let err = parse(r#"{"schema_version": 1, "scenarios": [{"kind": "laser"}]}"#, &[]).unwrap_err();
        assert!(err.to_string().contains("scenarios[0].kind"), "{err}");
    }

    #[test]
    fn override_sets_nested_value() {
        let c = parse(MINIMAL, &["scenarios.0.alpha_par=1.0".into(), "seed=9".into()]).unwrap();
        let Scenario::CavitySpectrum(cav) = &c.scenarios[0] else { panic!() };
        assert_eq!(cav.alpha_par, 1.0);
        assert_eq!(c.seed, 9);
        assert!(parse(MINIMAL, &["scenarios.3.alpha_par=1".into()]).is_err());
        assert!(parse(MINIMAL, &["novalue".into()]).is_err());
    }

    #[test]
    fn hash_ignores_seed_and_defaults() {
        let a = parse(MINIMAL, &[]).unwrap();
        let b = parse(MINIMAL, &["seed=5".into(), "output_dir=\"x\"".into(), "description=\"hi\"".into()]).unwrap();
        let c = parse(MINIMAL, &["scenarios.0.alpha_par=1.02".into()]).unwrap();
        let d = parse(MINIMAL, &["scenarios.0.alpha_par=1.03".into()]).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a), config_hash(&c));
        assert_ne!(config_hash(&a), config_hash(&d));
    }

    #[test]
    fn wrong_schema_version() {
        assert!(parse(r#"{"schema_version": 2}"#, &[]).is_err());
    }
}
