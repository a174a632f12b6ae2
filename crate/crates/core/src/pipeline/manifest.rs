use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Read;
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileHash {
    /// Path relative to the workspace root (absolute for external inputs).
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub stage: String,
    pub tool_version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub config: serde_json::Value,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
}

pub fn sha256_file(path: &Path) -> Result<(String, u64)> {
    let mut f = std::fs::File::open(path)?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 20];
    let mut total = 0u64;
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        total += n as u64;
        h.update(&buf[..n]);
    }
    Ok((hex::encode(h.finalize()), total))
}

/// Hashes `path` (resolved against `root` when relative).
pub fn hash_entry(root: &Path, path: &Path) -> Result<FileHash> {
    let full = root.join(path);
    let (sha256, bytes) = sha256_file(&full)?;
    Ok(FileHash {
        path: path.to_path_buf(),
        sha256,
        bytes,
    })
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(f))?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Checks that every recorded output still exists with the recorded
    /// hash. A mismatch is an error unless `force` is set.
    pub fn verify_outputs(&self, root: &Path, force: bool) -> Result<()> {
        for out in &self.outputs {
            let full = root.join(&out.path);
            if !full.exists() {
                return Err(Error::MissingArtifact {
                    stage: self.stage.clone(),
                    path: full,
                });
            }
            let (sha, _) = sha256_file(&full)?;
            if sha != out.sha256 {
                if force {
                    log::warn!("{} changed since `{}` ran; continuing (--force)", full.display(), self.stage);
                } else {
                    return Err(Error::StaleArtifact { path: full });
                }
            }
        }
        Ok(())
    }

    pub fn output(&self, name: &str) -> Option<&FileHash> {
        self.outputs.iter().find(|o| o.path.file_name().is_some_and(|f| f == name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_modified_output() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("s")).unwrap();
        std::fs::write(dir.path().join("s/a.txt"), "hello").unwrap();
        let m = Manifest {
            stage: "s".into(),
            tool_version: "0".into(),
            seed: 0,
            created: 0,
            config: serde_json::Value::Null,
            inputs: vec![],
            outputs: vec![hash_entry(dir.path(), Path::new("s/a.txt")).unwrap()],
        };
        assert_eq!(
            m.outputs[0].sha256,
            "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824"
        );
        m.verify_outputs(dir.path(), false).unwrap();
        std::fs::write(dir.path().join("s/a.txt"), "hullo").unwrap();
        assert!(matches!(m.verify_outputs(dir.path(), false), Err(Error::StaleArtifact { .. })));
        m.verify_outputs(dir.path(), true).unwrap();
        std::fs::remove_file(dir.path().join("s/a.txt")).unwrap();
        assert!(matches!(m.verify_outputs(dir.path(), true), Err(Error::MissingArtifact { .. })));
    }
}
