//! Dataset manifest pinning format version, per-file SHA-256 and as-of
//! dates. Loading a dataset verifies every checksum before any file is
//! parsed.
//!
//! ```toml
//! format_version = 1
//! note = "..."
//!
//! [[file]]
//! path = "assessments.csv"
//! sha256 = "…64 hex digits…"
//! as_of = "2025-05-31"
//! ```

use std::path::Path;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::{read_text, source_name};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    /// Relative to the manifest's directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub as_of: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(rename = "file")]
    pub files: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn entry(&self, path: &str) -> Option<&ManifestEntry> {
        self.files.iter().find(|e| e.path == path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_manifest(text: &str, source: &str) -> Result<DatasetManifest> {
    let m: DatasetManifest =
        toml::from_str(text).map_err(|e| Error::Config(format!("{source}: {e}")))?;
    if m.format_version != FORMAT_VERSION {
        return Err(Error::Config(format!(
            "{source}: unsupported format_version {} (expected {FORMAT_VERSION})",
            m.format_version
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in &m.files {
        if !seen.insert(e.path.as_str()) {
            return Err(Error::Config(format!(
                "{source}: '{}' listed twice",
                e.path
            )));
        }
        if e.sha256.len() != 64 || !e.sha256.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Config(format!(
                "{source}: '{}' has a malformed sha256",
                e.path
            )));
        }
    }
    Ok(m)
}

pub fn write_manifest(m: &DatasetManifest) -> String {
    toml::to_string(m).expect("manifest serializes to TOML")
}

/// Checks every listed file under `base` against its recorded digest.
pub fn verify_manifest(m: &DatasetManifest, base: &Path) -> Result<()> {
    m.files.par_iter().try_for_each(|e| {
        let path = base.join(&e.path);
        let bytes = std::fs::read(&path).map_err(|err| Error::io(&path, err))?;
        let found = sha256_hex(&bytes);
        if !found.eq_ignore_ascii_case(&e.sha256) {
            return Err(Error::Checksum {
                path: source_name(&path),
                expected: e.sha256.clone(),
                found,
            });
        }
        Ok(())
    })
}

/// Reads `manifest.toml` in `dir` and verifies it.
pub fn load_verified_manifest(dir: &Path) -> Result<DatasetManifest> {
    let path = dir.join("manifest.toml");
    let m = parse_manifest(&read_text(&path)?, &source_name(&path))?;
    verify_manifest(&m, dir)?;
    Ok(m)
}

/// Manifest describing `paths` (relative to `base`) with fresh digests.
pub fn build_manifest(
    base: &Path,
    paths: &[(&str, NaiveDate)],
    note: Option<String>,
) -> Result<DatasetManifest> {
    let files = paths
        .iter()
        .map(|(p, as_of)| {
            let full = base.join(p);
            let bytes = std::fs::read(&full).map_err(|err| Error::io(&full, err))?;
            Ok(ManifestEntry {
                path: p.to_string(),
                sha256: sha256_hex(&bytes),
                as_of: *as_of,
            })
        })
        .collect::<Result<_>>()?;
    Ok(DatasetManifest {
        format_version: FORMAT_VERSION,
        note,
        files,
    })
}
