//! State sources and atomic output.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tempfile::NamedTempFile;

use crate::error::Error;
use crate::states::schema::{Preset, StateDoc};
use crate::states::DensityMatrix;
use crate::weyl::System;

use super::CliError;

/// A state given on the command line: a JSON file or `preset:NAME[:SEED]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateSource {
    File(PathBuf),
    Preset { preset: Preset, seed: Option<u64> },
}

impl FromStr for StateSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let Some(rest) = s.strip_prefix("preset:") else {
            return Ok(Self::File(PathBuf::from(s)));
        };
        let (name, seed) = match rest.split_once(':') {
            Some((name, seed)) => {
                let seed = seed.parse().map_err(|e| Error::Parse(format!("bad preset seed {seed:?}: {e}")))?;
                (name, Some(seed))
            }
            None => (rest, None),
        };
        Ok(Self::Preset { preset: name.parse()?, seed })
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn build_preset(preset: Preset, sys: System, seed: Option<u64>) -> Result<DensityMatrix, CliError> {
    Ok(preset.build(sys, seed)?)
}

/// Loads a state. Presets are built on `sys` with their own seed, falling
/// back to `default_seed`; files carry their own system.
pub fn load_state(
    src: &StateSource,
    sys: Option<System>,
    default_seed: Option<u64>,
) -> Result<DensityMatrix, CliError> {
    match src {
        StateSource::File(path) => {
            let text = read_text(path)?;
            let doc = StateDoc::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(doc.to_state()?)
        }
        StateSource::Preset { preset, seed } => {
            let sys = sys.ok_or_else(|| CliError::Usage("presets need --d and --n".into()))?;
            build_preset(*preset, sys, seed.or(default_seed))
        }
    }
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
