//! Output sink: standard output, or files in `--out` followed by `manifest.json`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Serialize)]
struct FileEntry {
    path: String,
    bytes: u64,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    started_unix: u64,
    wall_seconds: f64,
    files: Vec<FileEntry>,
}

pub struct Sink {
    dir: Option<PathBuf>,
    written: Vec<(String, Vec<u8>)>,
    started: Instant,
    started_unix: u64,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Sink {
            dir,
            written: Vec::new(),
            started: Instant::now(),
            started_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        })
    }

    /// Writes `bytes` to `name` in the output directory, or to standard output.
    pub fn emit(&mut self, name: &str, bytes: Vec<u8>) -> io::Result<()> {
        match &self.dir {
            Some(d) => {
                write_atomic(&d.join(name), &bytes)?;
                self.written.push((name.to_string(), bytes));
            }
            None => io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }

    pub fn emit_json<T: Serialize>(&mut self, name: &str, value: &T) -> io::Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
        bytes.push(b'\n');
        self.emit(name, bytes)
    }

    /// Writes the manifest after all outputs; a no-op without an output directory.
    pub fn finish(self, command: &str, config: &RunConfig) -> io::Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        let files = self
            .written
            .iter()
            .map(|(path, bytes)| FileEntry {
                path: path.clone(),
                bytes: bytes.len() as u64,
                sha256: format!("{:x}", Sha256::digest(bytes)),
            })
            .collect();
        let manifest = RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config,
            started_unix: self.started_unix,
            wall_seconds: self.started.elapsed().as_secs_f64(),
            files,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest).map_err(io::Error::other)?;
        bytes.push(b'\n');
        write_atomic(&dir.join("manifest.json"), &bytes)
    }
}

/// Serializes rows to CSV with a header row.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(io::Error::other)?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}
