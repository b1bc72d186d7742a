use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use mvkit::MvError;
use nalgebra::DMatrix;

use crate::error::CliResult;

/// Flat key → number map written as `metrics.json` or `summary.json`.
pub type NumberMap = BTreeMap<String, f64>;

/// Writes files into the output directory and remembers their names.
pub struct OutDir {
    pub path: PathBuf,
    pub written: Vec<String>,
}

fn io_err(path: &Path, e: std::io::Error) -> MvError {
    MvError::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

impl OutDir {
    pub fn create(path: &Path) -> CliResult<Self> {
        fs::create_dir_all(path).map_err(|e| io_err(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    pub fn record(&mut self, name: impl Into<String>) {
        self.written.push(name.into());
    }

    pub fn text(&mut self, name: &str, body: &str) -> CliResult<()> {
        let p = self.file(name);
        fs::write(&p, body).map_err(|e| io_err(&p, e))?;
        self.record(name);
        Ok(())
    }

    /// One row per line, values at 17 significant digits.
    pub fn matrix(&mut self, name: &str, m: &DMatrix<f64>) -> CliResult<()> {
        let mut s = String::with_capacity(m.len() * 24);
        for row in m.row_iter() {
            let mut first = true;
            for v in row.iter() {
                if !first {
                    s.push(',');
                }
                first = false;
                let _ = write!(s, "{v:.16e}");
            }
            s.push('\n');
        }
        self.text(name, &s)
    }

    pub fn column<D: std::fmt::Display>(&mut self, name: &str, values: &[D]) -> CliResult<()> {
        let mut s = String::new();
        for v in values {
            let _ = writeln!(s, "{v}");
        }
        self.text(name, &s)
    }

    pub fn json(&mut self, name: &str, value: &serde_json::Value) -> CliResult<()> {
        let mut body = serde_json::to_string_pretty(value).expect("json values always serialize");
        body.push('\n');
        self.text(name, &body)
    }

    pub fn numbers(&mut self, name: &str, map: &NumberMap) -> CliResult<()> {
        let obj: serde_json::Map<String, serde_json::Value> =
            map.iter().map(|(k, &v)| (k.clone(), serde_json::Value::from(v))).collect();
        self.json(name, &serde_json::Value::Object(obj))
    }
}

/// `17 significant digits` formatting for a single value.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}
