//! Atomic dataset output and run manifests.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Settings;

#[derive(Debug, Serialize)]
pub struct DatasetEntry {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub params: &'a Settings,
    pub version: &'static str,
    pub datasets: Vec<DatasetEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Write `contents` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Write the CSV and its manifest.
pub fn emit(command: &str, params: &Settings, out: &Path, csv: &str) -> io::Result<()> {
    write_atomic(out, csv.as_bytes())?;
    let manifest = RunManifest {
        command,
        params,
        version: env!("CARGO_PKG_VERSION"),
        datasets: vec![DatasetEntry {
            path: out.to_path_buf(),
            sha256: sha256_hex(csv.as_bytes()),
        }],
    };
    let mut json = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
    json.push('\n');
    write_atomic(&manifest_path(out), json.as_bytes())
}
