//! Artifact writers: versioned CSV tables, key-value blocks and run records.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Failure;

/// First line of every CSV artifact.
pub const SCHEMA_LINE: &str = "# schema=1";

/// Shortest round-trip representation, so that identical runs give
/// byte-identical files.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// A CSV table under construction.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// Table with the given column names.
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    /// Append a row of numbers.
    pub fn push(&mut self, row: &[f64]) {
        self.push_raw(row.iter().map(|&v| num(v)).collect());
    }

    /// Append a preformatted row.
    pub fn push_raw(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Number of data rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Whether the table has no data rows.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Write `# schema=1`, the header and all rows.
    pub fn write(&self, path: &Path) -> Result<(), Failure> {
        let mut file = File::create(path).map_err(|e| Failure::validation(format!("cannot create {}: {e}", path.display())))?;
        writeln!(file, "{SCHEMA_LINE}")?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `key = value` lines.
pub fn kv_block(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// Collects the files written by a run.
#[derive(Debug, Clone)]
pub struct ArtifactDir {
    root: PathBuf,
    written: Vec<String>,
}

impl ArtifactDir {
    /// Create (if needed) and probe the directory.
    pub fn create(root: &Path) -> Result<Self, Failure> {
        std::fs::create_dir_all(root).map_err(|e| Failure::validation(format!("output_dir {} is not usable: {e}", root.display())))?;
        let meta = std::fs::metadata(root)?;
        if meta.permissions().readonly() {
            return Err(Failure::validation(format!("output_dir {} is not writable", root.display())));
        }
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    /// Directory path.
    pub fn root(&self) -> &Path {
        &self.root
    }

    /// File names written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Write a CSV table.
    pub fn table(&mut self, name: &str, t: &Table) -> Result<(), Failure> {
        t.write(&self.root.join(name))?;
        self.note(name);
        Ok(())
    }

    /// Write a text file.
    pub fn text(&mut self, name: &str, body: &str) -> Result<(), Failure> {
        let path = self.root.join(name);
        std::fs::write(&path, body).map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))?;
        self.note(name);
        Ok(())
    }

    fn note(&mut self, name: &str) {
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
    }
}
