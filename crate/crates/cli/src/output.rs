//! Artifact files and the run manifest.

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, SCHEMA_VERSION};
use crate::scenarios::ScenarioOutput;
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub scenario: usize,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioEntry {
    pub index: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub scenarios: Vec<ScenarioEntry>,
    pub artifacts: Vec<ArtifactEntry>,
}

fn slug(text: &str) -> String {
    let s: String = text
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect();
    let s = s.trim_matches('-').to_string();
    if s.is_empty() {
        "scenario".into()
    } else {
        s
    }
}

pub fn artifact_name(index: usize, label: &str, suffix: &str) -> String {
    format!("{index:02}-{}-{suffix}", slug(label))
}

pub fn write_run(
    out: &Path,
    config: &ExperimentConfig,
    hash: &str,
    outputs: &[ScenarioOutput],
) -> Result<Manifest, CliError> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: hash.into(),
        seed: config.seed,
        scenarios: Vec::new(),
        artifacts: Vec::new(),
    };
    for (index, (scenario, output)) in config.scenarios.iter().zip(outputs).enumerate() {
        let label = scenario.name().unwrap_or(scenario.kind());
        manifest.scenarios.push(ScenarioEntry {
            index,
            kind: scenario.kind().into(),
            name: scenario.name().map(str::to_string),
        });
        for artifact in &output.artifacts {
            let file = artifact_name(index, label, &artifact.suffix);
            let path = out.join(&file);
            fs::write(&path, &artifact.contents).with_context(|| format!("writing {}", path.display()))?;
            manifest.artifacts.push(ArtifactEntry {
                file,
                scenario: index,
                sha256: hex::encode(Sha256::digest(artifact.contents.as_bytes())),
                bytes: artifact.contents.len(),
            });
        }
    }
    let mut text = serde_json::to_string_pretty(&manifest).context("serializing manifest")?;
    text.push('\n');
    let path = out.join(MANIFEST_FILE);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(artifact_name(3, "Fig 9 / Rabi", "trace.csv"), "03-fig-9---rabi-trace.csv");
        assert_eq!(artifact_name(0, "spin-echo", "summary.json"), "00-spin-echo-summary.json");
        assert_eq!(artifact_name(1, "??", "a.csv"), "01-scenario-a.csv");
    }
}
