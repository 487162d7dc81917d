//! Report records and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::torus::TruncationReceipt;

/// One judged comparison. `pass` is `residual ≤ tolerance`; a non-finite
/// residual never passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The statement being checked, in words.
    pub anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, lhs: f64, rhs: f64, residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// `|lhs − rhs|` against `tolerance`.
    pub fn equal(name: impl Into<String>, anchor: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, lhs, rhs, (lhs - rhs).abs(), tolerance)
    }

    /// `lhs ≤ rhs`, with the excess as residual.
    pub fn at_most(name: impl Into<String>, anchor: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, lhs, rhs, (lhs - rhs).max(0.0), tolerance)
    }

    /// A norm that should vanish.
    pub fn zero(name: impl Into<String>, anchor: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, value, 0.0, value.abs(), tolerance)
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "{} {} residual={:.3e} tolerance={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentReport {
    pub tool: String,
    pub version: String,
    /// The only field that varies between identical runs.
    pub timestamp: String,
    pub config: ExperimentConfig,
    pub checks: Vec<CheckRecord>,
    pub receipts: Vec<TruncationReceipt>,
    /// Experiment-specific tables.
    pub data: serde_json::Value,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, checks: Vec<CheckRecord>, receipts: Vec<TruncationReceipt>, data: serde_json::Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        ExperimentReport {
            tool: "hodgelab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string(),
            config,
            checks,
            receipts,
            data,
            pass,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A named CSV table written next to the report.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub file: String,
    pub body: String,
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Contract(format!("no file name in {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}
