//! Instance corpus: SGC files plus a JSON manifest of oracle-checked colorability.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{parse_sgc, Coloring, SuccinctCircuit};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub n: u32,
    pub m: u64,
    pub colorable: bool,
    /// A valid coloring when `colorable`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Coloring>,
    /// A coloring with the fewest monochromatic edges when not `colorable`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_coloring: Option<Coloring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub instances: Vec<ManifestEntry>,
}

/// A loaded corpus directory.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl Corpus {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        let text = fs::read_to_string(dir.join(MANIFEST))
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.join(MANIFEST).display())))?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("manifest: {e}")))?;
        Ok(Corpus { dir, manifest })
    }

    pub fn circuit(&self, entry: &ManifestEntry) -> Result<SuccinctCircuit> {
        read_instance(self.dir.join(&entry.file))
    }

    pub fn entry(&self, name: &str) -> Option<&ManifestEntry> {
        self.manifest.instances.iter().find(|e| e.name == name)
    }
}

/// Reads and parses one SGC file. I/O failures map to `InvalidArgument`.
pub fn read_instance(path: impl AsRef<Path>) -> Result<SuccinctCircuit> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    parse_sgc(&text)
}
