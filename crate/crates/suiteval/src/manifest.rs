//! Run manifests: a JSON sidecar written next to every stage output,
//! recording the tool version, seed, tie policy, adapter configuration and
//! the SHA-256 of every input file. Re-running a stage with inputs whose
//! hashes match its manifest reproduces the output byte for byte; with
//! `--strict`, a hash mismatch against a prior manifest is an error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, HarnessResult};
use crate::util::{atomic_write, sha256_file};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct RunManifest {
    pub tool_version: String,
    pub created_unix: u64,
    pub stage: String,
    /// Relative or as-given input path → SHA-256 of its bytes.
    pub input_hashes: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adapter: Option<AdapterInfo>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdapterInfo {
    pub mode: String,
    pub polarity: String,
    pub system_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

impl RunManifest {
    pub fn new(stage: &str) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            stage: stage.to_string(),
            ..Default::default()
        }
    }

    pub fn record_input(&mut self, path: &Path) -> HarnessResult<()> {
        let hash = sha256_file(path)?;
        self.input_hashes
            .insert(path.to_string_lossy().into_owned(), hash);
        Ok(())
    }
}

/// Where the sidecar for a given output lives.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn write_manifest(output: &Path, manifest: &RunManifest) -> HarnessResult<()> {
    let mut json = serde_json::to_string_pretty(manifest)?;
    json.push('\n');
    atomic_write(&manifest_path(output), &json)
}

pub fn read_manifest(output: &Path) -> HarnessResult<RunManifest> {
    let path = manifest_path(output);
    let text = fs::read_to_string(&path).map_err(|_| HarnessError::MissingInput(path))?;
    Ok(serde_json::from_str(&text)?)
}

/// Strict mode: every input recorded in the manifest of `upstream_output`
/// must still hash to its recorded value.
pub fn verify_manifest(upstream_output: &Path) -> HarnessResult<()> {
    let manifest = read_manifest(upstream_output)?;
    for (path, recorded) in &manifest.input_hashes {
        let path = Path::new(path);
        let current = sha256_file(path)?;
        if &current != recorded {
            return Err(HarnessError::ManifestMismatch {
                path: path.into(),
                recorded: recorded.clone(),
                current,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn sidecar_naming() {
        assert_eq!(
            manifest_path(Path::new("out/run.labels.tsv")),
            Path::new("out/run.labels.tsv.manifest.json")
        );
    }

    #[test]
    fn verify_detects_modified_input() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.tsv");
        fs::write(&input, "original").unwrap();
        let output = dir.path().join("out.tsv");
        fs::write(&output, "result").unwrap();

        let mut manifest = RunManifest::new("label");
        manifest.record_input(&input).unwrap();
        write_manifest(&output, &manifest).unwrap();
        verify_manifest(&output).unwrap();

        let mut f = fs::OpenOptions::new().append(true).open(&input).unwrap();
        writeln!(f, "tampered").unwrap();
        let err = verify_manifest(&output).unwrap_err();
        assert!(matches!(err, HarnessError::ManifestMismatch { .. }));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let output = dir.path().join("pairs.tsv");
        fs::write(&output, "x").unwrap();
        let mut manifest = RunManifest::new("pairs");
        manifest.seed = Some(42);
        manifest.tie_policy = Some("half_credit".into());
        write_manifest(&output, &manifest).unwrap();
        let back = read_manifest(&output).unwrap();
        assert_eq!(back.seed, Some(42));
        assert_eq!(back.stage, "pairs");
        assert_eq!(back.tool_version, TOOL_VERSION);
    }
}
