//! Output directory bookkeeping and the checksum manifest.

use sha2::{Digest, Sha256};
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
    started: u64,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self {
            root,
            files: Vec::new(),
            started: unix_now(),
        })
    }

    /// Opens `rel` for writing and records it for the manifest.
    pub fn create_file(&mut self, rel: &str) -> io::Result<io::BufWriter<fs::File>> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        if !self.files.iter().any(|f| f == rel) {
            self.files.push(rel.to_string());
        }
        Ok(io::BufWriter::new(fs::File::create(path)?))
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> io::Result<()> {
        let mut f = self.create_file(rel)?;
        f.write_all(bytes)?;
        f.flush()
    }

    /// Writes `manifest.txt` listing every recorded file with its SHA-256; call last.
    pub fn finish(self, command: &str, seed: u64, config_text: &str) -> io::Result<()> {
        let mut m = String::new();
        m.push_str(&format!("command = {command}\n"));
        m.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
        m.push_str(&format!("seed = {seed}\n"));
        m.push_str(&format!("started_unix = {}\n", self.started));
        m.push_str(&format!("finished_unix = {}\n", unix_now()));
        m.push_str("\n[config]\n");
        for line in config_text.lines() {
            m.push_str(line);
            m.push('\n');
        }
        m.push_str("\n[files]\n");
        for rel in &self.files {
            let digest = Sha256::digest(fs::read(self.root.join(rel))?);
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            m.push_str(&format!("{hex}  {rel}\n"));
        }
        fs::write(self.root.join("manifest.txt"), m)
    }
}

/// Stable file stem for a time value: `t000123.450`.
pub fn time_stem(t: f64) -> String {
    format!("t{t:010.3}")
}
