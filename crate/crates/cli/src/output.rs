//! CSV tables and all-or-nothing artifact writing.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// A CSV table kept as text cells so that what is written is exactly what
/// was formatted.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)
            .map_err(|e| CliError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Shortest decimal text that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn flag(b: bool) -> String {
    (b as u8).to_string()
}

/// Named file contents, written together or not at all.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Stages every file under a temporary name and renames them into place
    /// only once all of them were written.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let io = |p: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
        let cleanup = |staged: &[(PathBuf, PathBuf)]| {
            for (tmp, _) in staged {
                let _ = fs::remove_file(tmp);
            }
        };
        for (name, bytes) in &self.files {
            let dest = dir.join(name);
            let tmp = dir.join(format!(".{name}.partial"));
            if let Err(e) = fs::write(&tmp, bytes) {
                let _ = fs::remove_file(&tmp);
                cleanup(&staged);
                return Err(io(&tmp, e));
            }
            staged.push((tmp, dest));
        }
        let mut done = Vec::new();
        for (k, (tmp, dest)) in staged.iter().enumerate() {
            if let Err(e) = fs::rename(tmp, dest) {
                cleanup(&staged[k..]);
                return Err(io(dest, e));
            }
            done.push(dest.clone());
        }
        Ok(done)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [
            0.1,
            1.0 / 3.0,
            5e10,
            1e-300,
            -2.5266,
            f64::MAX,
            f64::MIN_POSITIVE,
            37.02,
        ] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(2.0), "2.0");
    }

    #[test]
    fn csv_has_header_row() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(1.5), flag(true)]);
        assert_eq!(
            String::from_utf8(t.to_csv().unwrap()).unwrap(),
            "a,b\n1.5,1\n"
        );
    }
}
