//! CSV tables, JSON verdicts and check bookkeeping.

use std::path::{Path, PathBuf};

use qfock::Quat;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// One assertion-mode check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Threshold the value is compared against, if the check is numeric.
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance: Some(tolerance), pass: value <= tolerance }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), value: if pass { 1.0 } else { 0.0 }, tolerance: None, pass }
    }
}

/// Result of an experiment before it is written out.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl Outcome {
    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("summary values serialize");
        self.summary.insert(key.into(), v);
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Output directory and the files written to it.
#[derive(Debug)]
pub struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
        Ok(Artifacts { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn csv<I>(&mut self, file: &str, header: &[&str], rows: I) -> CliResult<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.dir.join(file);
        let err = |e: csv::Error| CliError::Output { path: path.clone(), source: std::io::Error::other(e) };
        let mut w = csv::Writer::from_path(&path).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|source| CliError::Output { path: path.clone(), source })?;
        self.written.push(file.into());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, file: &str, value: &T) -> CliResult<()> {
        let path = self.dir.join(file);
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|source| CliError::Output { path: path.clone(), source })?;
        self.written.push(file.into());
        Ok(())
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Four columns `re, i, j, k`.
pub fn quat_cols(q: Quat) -> [String; 4] {
    q.to_array().map(num)
}
