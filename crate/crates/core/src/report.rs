//! Self-contained report files.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticReport;
use crate::bridge::PairingReport;
use crate::error::{Error, Result};
use crate::search::{verify_certificate, EnumerationReport, ProblemSpec, SolutionCertificate};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Enumeration(EnumerationReport),
    Pairing(PairingReport),
    Analytic(AnalyticReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool_version: String,
    /// Echo of the resolved run configuration.
    pub config: serde_json::Value,
    pub wall_clock_seconds: f64,
    pub payload: Payload,
}

impl ReportFile {
    pub fn new(config: serde_json::Value, wall_clock_seconds: f64, payload: Payload) -> Self {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            config,
            wall_clock_seconds,
            payload,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a report, rejecting other schema versions.
    pub fn from_json(text: &str) -> Result<ReportFile> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let version = v.get("schema_version").and_then(|x| x.as_u64());
        if version != Some(SCHEMA_VERSION as u64) {
            return Err(Error::InvalidProblem(format!(
                "unsupported report schema {version:?} (expected {SCHEMA_VERSION})"
            )));
        }
        Ok(serde_json::from_value(v)?)
    }

    pub fn load(path: &Path) -> Result<ReportFile> {
        ReportFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    /// Problem and certificates to re-check, if the payload has any.
    pub fn certificates(&self) -> Option<(&ProblemSpec, &[SolutionCertificate])> {
        match &self.payload {
            Payload::Enumeration(r) => Some((&r.problem, &r.certificates)),
            Payload::Analytic(r) => Some((&r.problem, &r.certificates)),
            Payload::Pairing(_) => None,
        }
    }
}

/// Outcome of re-checking every certificate in a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifySummary {
    pub checked: usize,
    pub failed: Vec<usize>,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }
}

pub fn verify_report(report: &ReportFile) -> Result<VerifySummary> {
    let Some((problem, certs)) = report.certificates() else {
        return Ok(VerifySummary {
            checked: 0,
            failed: Vec::new(),
        });
    };
    let mut failed = Vec::new();
    for (i, c) in certs.iter().enumerate() {
        if c.problem_id != problem.id() || !verify_certificate(problem, c)? {
            failed.push(i);
        }
    }
    Ok(VerifySummary {
        checked: certs.len(),
        failed,
    })
}

/// Writes `bytes` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidProblem(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}
