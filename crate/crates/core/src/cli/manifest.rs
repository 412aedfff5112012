use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// The reproducible part of a run: enough to regenerate every output.
/// Written as the `#` header line of each CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunHeader {
    pub fn new<P: Serialize>(subcommand: &str, parameters: &P, seed: Option<u64>) -> Result<Self> {
        Ok(Self {
            subcommand: subcommand.to_string(),
            parameters: serde_json::to_value(parameters)?,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn csv_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// `manifest.json`: the header plus wall time and the list of files written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub header: RunHeader,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
    pub passed: bool,
}

/// Collects output files of one run under a directory.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Opens `name` for writing and records it.
    pub fn file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let w = BufWriter::new(File::create(self.root.join(name))?);
        self.written.push(name.to_string());
        Ok(w)
    }

    pub fn path(&mut self, name: &str) -> PathBuf {
        self.written.push(name.to_string());
        self.root.join(name)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut w = self.file(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn finish(mut self, header: RunHeader, wall_time_seconds: f64, passed: bool) -> Result<RunManifest> {
        self.written.push("manifest.json".to_string());
        let manifest = RunManifest {
            header,
            wall_time_seconds,
            outputs: self.written.clone(),
            passed,
        };
        let mut w = BufWriter::new(File::create(self.root.join("manifest.json"))?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(manifest)
    }
}
