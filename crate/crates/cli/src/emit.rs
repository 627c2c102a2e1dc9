//! File emission: atomic writes, SHA-256 digests, CSV formatting, and the
//! run record.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dasa_core::dynamics::Trajectory;

/// 17 significant digits: lossless double round-trip for regression diffs.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Tracks every file emitted during a run and writes them atomically
/// (temp file + rename) with LF line endings and UTF-8 content.
pub struct Emitter {
    out_dir: PathBuf,
    outputs: Vec<OutputFile>,
}

impl Emitter {
    pub fn new(out_dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(Self { out_dir: out_dir.to_path_buf(), outputs: Vec::new() })
    }

    pub fn outputs(&self) -> &[OutputFile] {
        &self.outputs
    }

    pub fn write(&mut self, name: &str, content: &str) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension("tmp-partial");
        fs::write(&tmp, content)?;
        fs::rename(&tmp, &path)?;
        self.outputs.push(OutputFile {
            path: name.to_string(),
            sha256: sha256_hex(content.as_bytes()),
            bytes: content.len() as u64,
        });
        Ok(path)
    }
}

/// Trajectory CSV: `t`, per-component `re{i}`/`im{i}`, per-component
/// `pop{i}`, and the total intensity `norm`. Component 0 is the bare state
/// written `(1,0)^T`; the last component is the chain's other end.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let dim = traj.states()[0].dim();
    let mut head = vec!["t".to_string()];
    for i in 0..dim {
        head.push(format!("re{i}"));
        head.push(format!("im{i}"));
    }
    for i in 0..dim {
        head.push(format!("pop{i}"));
    }
    head.push("norm".into());

    let mut out = head.join(",");
    out.push('\n');
    for k in 0..traj.len() {
        let mut row = vec![num(traj.times()[k])];
        for a in traj.states()[k].amplitudes() {
            row.push(num(a.re));
            row.push(num(a.im));
        }
        for p in &traj.populations()[k] {
            row.push(num(*p));
        }
        row.push(num(traj.norms()[k]));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Record of one run: the resolved config snapshot, artifact version,
/// timestamps, and a digest of every emitted file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub artifact_version: String,
    pub mode: String,
    pub started_utc: String,
    pub finished_utc: String,
    pub config_snapshot: String,
    pub outputs: Vec<OutputFile>,
}

impl RunRecord {
    pub fn new(
        mode: &str,
        started_utc: String,
        config_snapshot: String,
        outputs: Vec<OutputFile>,
    ) -> Self {
        Self {
            schema_version: crate::config::SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            mode: mode.to_string(),
            started_utc,
            finished_utc: chrono::Utc::now().to_rfc3339(),
            config_snapshot,
            outputs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}
