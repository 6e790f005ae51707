//! Certificates, the verification suite, reports and the command line.
//!
//! A certificate records the canonical text of its inputs next to the
//! verdict. [`evaluate`] is the only place a verdict is computed, both when
//! the suite runs and when a stored certificate is re-checked, so a
//! re-check reproduces the record exactly.

mod check;
mod cli;
mod report;
mod suite;

pub use check::{evaluate, Check, Context, FamilyInputs, Outcome};
pub use cli::{run, Cli};
pub use report::{render_report, ReportFormat};
pub use suite::{
    family_document, load_family_document, recheck_file, run_suite, DatumSummary, FamilyDocument, FamilyRecord,
    SuiteConfig,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = concat!("primfilt ", env!("CARGO_PKG_VERSION"));

/// Largest |k| the suite accepts.
pub const K_BOUND: i64 = 6;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("{0}")]
    Failure(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CertifyError {
    /// 1 for a computation that failed, 2 for anything the caller supplied.
    pub fn exit_code(&self) -> i32 {
        match self {
            CertifyError::Failure(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub arrangement: String,
    pub multiplicity: Option<String>,
    #[serde(flatten)]
    pub check: Check,
    pub verdict: Verdict,
    pub detail: String,
    pub witness: serde_json::Value,
    pub tool_version: String,
    pub seed: u64,
    pub normalization: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn kind(&self) -> &'static str {
        self.check.kind()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    pub tool_version: String,
    pub seed: u64,
    pub arrangements: Vec<String>,
    pub certificates: Vec<Certificate>,
}

impl CertificateFile {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| !c.passed())
    }

    pub fn from_json(text: &str) -> Result<CertificateFile, CertifyError> {
        let file: CertificateFile = serde_json::from_str(text).map_err(|e| CertifyError::Input(e.to_string()))?;
        if file.schema != SCHEMA {
            return Err(CertifyError::Input(format!("unsupported schema {}", file.schema)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}
