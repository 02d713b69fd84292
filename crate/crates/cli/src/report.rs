use std::io::Write;
use std::path::Path;

use serde::Serialize;

use selfaffine::{Error, Result};

use crate::input::InputFile;
use crate::Params;

#[derive(Debug, Serialize)]
pub struct Report<'a, R: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub seed: u64,
    pub wall_clock_seconds: f64,
    pub input: InputEcho<'a>,
    pub parameters: &'a Params,
    pub result: R,
}

#[derive(Debug, Serialize)]
pub struct InputEcho<'a> {
    pub path: String,
    #[serde(flatten)]
    pub content: &'a InputFile,
}

pub fn to_json<R: Serialize>(report: &Report<'_, R>) -> Result<String> {
    let mut s = serde_json::to_string(report).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
