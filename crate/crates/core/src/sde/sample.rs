use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use crate::error::{invalid, Error, Result};

/// Provenance of a [`SampleSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub config: SimConfig,
    pub drift: String,
    pub x0: Vec<f64>,
}

/// Terminal values of `n_paths` simulated paths, and optionally the paths.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub meta: SampleMeta,
    dim: usize,
    terminal: Vec<f64>,
    paths: Option<Vec<f64>>,
}

impl SampleSet {
    pub(crate) fn new(meta: SampleMeta, dim: usize, terminal: Vec<f64>, paths: Option<Vec<f64>>) -> Self {
        debug_assert_eq!(terminal.len(), meta.config.n_paths * dim);
        Self {
            meta,
            dim,
            terminal,
            paths,
        }
    }

    /// Builds a set from raw rows, e.g. samples drawn elsewhere.
    pub fn from_rows(meta: SampleMeta, dim: usize, terminal: Vec<f64>) -> Result<Self> {
        if dim == 0 || !terminal.len().is_multiple_of(dim) {
            return Err(invalid("terminal values do not fill whole rows"));
        }
        if terminal.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut meta = meta;
        meta.config.n_paths = terminal.len() / dim;
        Ok(Self::new(meta, dim, terminal, None))
    }

    pub fn n_paths(&self) -> usize {
        self.terminal.len() / self.dim
    }

    /// Width of each terminal row (1 for square-radius samples).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terminal(&self, i: usize) -> &[f64] {
        &self.terminal[i * self.dim..(i + 1) * self.dim]
    }

    pub fn terminal_values(&self) -> &[f64] {
        &self.terminal
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.terminal.chunks_exact(self.dim)
    }

    /// Full path of sample `i` as `(n_steps + 1) x dim` values, when stored.
    pub fn path(&self, i: usize) -> Option<&[f64]> {
        let paths = self.paths.as_ref()?;
        let len = (self.meta.config.n_steps() + 1) * self.dim;
        Some(&paths[i * len..(i + 1) * len])
    }

    /// CSV with a `#`-prefixed JSON provenance line, a column header and one
    /// row per path.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {}", serde_json::to_string(&self.meta)?)?;
        let header: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_csv(&mut w)?;
        w.flush()?;
        Ok(())
    }

    /// JSON sidecar with the seed, drift description and configuration.
    pub fn save_sidecar(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &self.meta)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    /// Rows `path, step, t, x1..xd` for every stored path.
    pub fn save_paths_csv(&self, path: &Path) -> Result<()> {
        let Some(_) = self.paths else {
            return Err(invalid("no full paths stored; enable store_full_paths"));
        };
        let mut w = BufWriter::new(File::create(path)?);
        let cols: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        writeln!(w, "path,step,t,{}", cols.join(","))?;
        let cfg = &self.meta.config;
        for i in 0..self.n_paths() {
            let p = self.path(i).unwrap_or_default();
            for (k, state) in p.chunks_exact(self.dim).enumerate() {
                let cells: Vec<String> = state.iter().map(|v| v.to_string()).collect();
                writeln!(w, "{i},{k},{},{}", cfg.grid_time(k), cells.join(","))?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a file written by [`SampleSet::save_csv`].
    pub fn load_csv(path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let first = lines.next().ok_or(Error::EmptySample)??;
        let json = first
            .strip_prefix("# ")
            .ok_or_else(|| invalid("missing '# ' provenance line"))?;
        let meta: SampleMeta = serde_json::from_str(json)?;
        let header = lines.next().ok_or(Error::EmptySample)??;
        let dim = header.split(',').count();
        let mut terminal = Vec::new();
        for line in lines {
            let line = line?;
            for cell in line.split(',') {
                terminal.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|_| invalid(format!("bad value '{cell}'")))?,
                );
            }
        }
        Self::from_rows(meta, dim, terminal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(n: usize) -> SampleMeta {
        SampleMeta {
            config: SimConfig::new(2, 1.0, 0.5, n, 7).unwrap(),
            drift: "zero".into(),
            x0: vec![0.0, 0.0],
        }
    }

    #[test]
    fn csv_round_trip() {
        let s = SampleSet::from_rows(meta(3), 2, vec![0.1, -2.0, 1e-300, 3.5, 0.0, -0.0]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        s.save_csv(&p).unwrap();
        let back = SampleSet::load_csv(&p).unwrap();
        assert_eq!(back.terminal_values(), s.terminal_values());
        assert_eq!(back.meta, s.meta);
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("# {"));
        assert_eq!(text.lines().nth(1), Some("x1,x2"));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(SampleSet::from_rows(meta(1), 2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(matches!(SampleSet::from_rows(meta(1), 2, vec![]), Err(Error::EmptySample)));
    }
}
