//! Per-directory artifact manifest: file name -> SHA-256, written next to
//! the artifacts it covers. Consumers verify hashes before trusting a file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use aimcheck::dataset::file_sha256;
use aimcheck::Error;

const MANIFEST_NAME: &str = "manifest.json";

pub struct Manifest {
    dir: PathBuf,
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn open(dir: &Path) -> Result<Self, Error> {
        let path = dir.join(MANIFEST_NAME);
        let entries = if path.exists() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::io(path.display().to_string(), e))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("manifest parse: {e}")))?
        } else {
            BTreeMap::new()
        };
        Ok(Manifest {
            dir: dir.to_path_buf(),
            entries,
        })
    }

    pub fn path_of(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Hashes a freshly written file into the manifest and persists it.
    pub fn record(&mut self, name: &str) -> Result<(), Error> {
        let hash = file_sha256(&self.path_of(name))?;
        self.entries.insert(name.to_string(), hash);
        let path = self.dir.join(MANIFEST_NAME);
        let text = serde_json::to_string_pretty(&self.entries).expect("manifest serializes");
        std::fs::write(&path, text).map_err(|e| Error::io(path.display().to_string(), e))
    }

    /// Verifies an artifact exists and matches its recorded hash. `hint`
    /// names the command that produces the artifact.
    pub fn verify(&self, name: &str, hint: &str) -> Result<PathBuf, Error> {
        let path = self.path_of(name);
        if !path.exists() || !self.entries.contains_key(name) {
            return Err(Error::MissingArtifact {
                path: path.display().to_string(),
                hint: format!("run `{hint}` first"),
            });
        }
        let expected = &self.entries[name];
        let found = file_sha256(&path)?;
        if &found != expected {
            return Err(Error::ManifestMismatch {
                path: path.display().to_string(),
                expected: expected.clone(),
                found,
            });
        }
        Ok(path)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))
}
