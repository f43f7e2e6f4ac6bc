//! The certificate file and its checker.
//!
//! A certificate records the base numbers of one construction. Every check
//! in [`verify`] recomputes what it needs from those numbers (the Tate
//! series included), so an embedded check list is informational only and
//! may be omitted.

mod checks;

pub use checks::{verify, CheckId, CheckReport, CheckResult, MAX_SUPPORTED_PRIME, NON_TORSION_SEARCH_BOUND};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::search::PrimalityEvidence;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate is not valid JSON: {0}")]
    Json(String),
    #[error("unsupported certificate format version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(u64),
    #[error("certificate has no format_version field")]
    MissingVersion,
    #[error("malformed field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot serialize certificate: {0}")]
    Serialize(String),
}

/// The normalized 2-torsion abscissae modulo `p^r` used to build the curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDigest {
    #[serde(with = "crate::decimal")]
    pub xpp1: BigInt,
    #[serde(with = "crate::decimal")]
    pub xpp2: BigInt,
    #[serde(with = "crate::decimal")]
    pub xpp3: BigInt,
}

/// How the solution was found. Never consulted by [`verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRecord {
    pub d_range: u64,
    pub x_window: u64,
    pub sieve_bound: u64,
    pub budget: u64,
    pub stream_index: u64,
    pub primality_tests: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
}

impl Default for Metadata {
    fn default() -> Self {
        Self { tool: "locyc".into(), version: env!("CARGO_PKG_VERSION").into(), seed: 0, search: None }
    }
}

/// One construction: the curve `y^2 = (x - a0)(x - b0)(x - c0)` and the
/// data that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format_version: u32,
    pub p: u64,
    pub r: u32,
    #[serde(with = "crate::decimal")]
    pub s1: BigInt,
    #[serde(with = "crate::decimal")]
    pub s2: BigInt,
    #[serde(with = "crate::decimal")]
    pub x0: BigInt,
    #[serde(with = "crate::decimal")]
    pub y0: BigInt,
    #[serde(with = "crate::decimal")]
    pub q1: BigInt,
    #[serde(with = "crate::decimal")]
    pub q2: BigInt,
    #[serde(with = "crate::decimal")]
    pub q3: BigInt,
    #[serde(with = "crate::decimal")]
    pub a0: BigInt,
    #[serde(with = "crate::decimal")]
    pub b0: BigInt,
    #[serde(with = "crate::decimal")]
    pub c0: BigInt,
    pub series: SeriesDigest,
    /// Evidence for `q1`, `q2`, `q3`, as recorded by the search.
    #[serde(default)]
    pub primality: Vec<PrimalityEvidence>,
    #[serde(default)]
    pub metadata: Metadata,
    /// Report embedded on emit; recomputed by [`verify`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckResult>>,
}

impl Certificate {
    /// Pretty JSON with a trailing newline. Deterministic byte for byte.
    pub fn emit(&self) -> Result<String, CertificateError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CertificateError::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CertificateError::Json(e.to_string()))?;
        match value.get("format_version") {
            None => return Err(CertificateError::MissingVersion),
            Some(v) => match v.as_u64() {
                Some(n) if n == FORMAT_VERSION as u64 => {}
                Some(n) => return Err(CertificateError::UnsupportedVersion(n)),
                None => {
                    return Err(CertificateError::Field {
                        field: "format_version".into(),
                        message: format!("expected an unsigned integer, found {v}"),
                    })
                }
            },
        }
        serde_path_to_error::deserialize(value).map_err(|e| {
            let field = e.path().to_string();
            CertificateError::Field { field, message: e.into_inner().to_string() }
        })
    }

    /// A copy with the check list replaced by a fresh report.
    pub fn with_checks(mut self) -> Self {
        self.checks = None;
        let report = verify(&self);
        self.checks = Some(report.checks);
        self
    }
}
