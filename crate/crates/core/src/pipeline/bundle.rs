use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Path relative to the bundle root, `/`-separated.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

pub fn sha256_file(path: &Path) -> Result<(u64, String)> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0u64;
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        total += n as u64;
        hasher.update(&buf[..n]);
    }
    Ok((total, hex::encode(hasher.finalize())))
}

/// Writes files under a staging directory and remembers each one.
pub(crate) struct BundleWriter {
    root: PathBuf,
    files: Vec<String>,
}

impl BundleWriter {
    pub fn new(root: PathBuf) -> Result<Self> {
        fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        Ok(Self { root, files: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Path for `rel`, creating parents and recording it.
    pub fn path(&mut self, rel: &str) -> Result<PathBuf> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        if !self.files.iter().any(|f| f == rel) {
            self.files.push(rel.to_owned());
        }
        Ok(path)
    }

    pub fn create(&mut self, rel: &str) -> Result<BufWriter<File>> {
        let path = self.path(rel)?;
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(BufWriter::new(file))
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, rel: &str, value: &T) -> Result<()> {
        let mut out = self.create(rel)?;
        serde_json::to_writer_pretty(&mut out, value)?;
        out.write_all(b"\n").and_then(|_| out.flush()).map_err(|e| Error::io(self.root.join(rel), e))
    }

    pub fn csv(&mut self, rel: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_writer(self.create(rel)?);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(self.root.join(rel), e))
    }

    pub fn entries(&self) -> Result<Vec<FileEntry>> {
        let mut files = self.files.clone();
        files.sort();
        files
            .into_iter()
            .map(|rel| {
                let (bytes, sha256) = sha256_file(&self.root.join(&rel))?;
                Ok(FileEntry { path: rel, bytes, sha256 })
            })
            .collect()
    }
}

/// Moves a finished staging directory to `dest`, replacing an earlier
/// bundle (one holding a manifest) or an empty directory.
pub(crate) fn publish(staging: &Path, dest: &Path) -> Result<()> {
    if dest.exists() {
        let is_bundle = dest.join("manifest.json").is_file();
        let is_empty = fs::read_dir(dest).map_err(|e| Error::io(dest, e))?.next().is_none();
        if !(is_bundle || is_empty) {
            return Err(Error::Config(format!(
                "output directory {} exists and is not a report bundle",
                dest.display()
            )));
        }
        fs::remove_dir_all(dest).map_err(|e| Error::io(dest, e))?;
    }
    fs::rename(staging, dest).map_err(|e| Error::io(dest, e))
}

pub fn fmt6(x: f64) -> String {
    if x.is_nan() {
        "NA".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.6}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), fmt6)
}

/// Directory-safe form of a relation name.
pub fn slug(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}
