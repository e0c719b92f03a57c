//! Deterministic CSV and JSON writers.
//!
//! Floats are printed with 12 significant digits and a '.' decimal so that
//! repeated runs are byte-identical and CI diffs stay readable.

use std::io::Write;
use std::path::Path;

/// 12 significant digits, scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        // Normalize -0.0 so output never depends on rounding direction.
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn new_owned(header: Vec<String>) -> Self {
        CsvTable {
            header,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells.to_vec());
    }

    pub fn row_owned(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// JSON verdict summary for one command run; the shape is described by
/// schemas/summary.schema.json.
pub struct Summary {
    command: String,
    input: String,
    reports: Vec<serde_json::Value>,
}

impl Summary {
    pub fn new(command: &str, input: &Path) -> Self {
        Summary {
            command: command.to_string(),
            input: input.display().to_string(),
            reports: Vec::new(),
        }
    }

    pub fn report(&mut self, value: serde_json::Value) {
        self.reports.push(value);
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let doc = serde_json::json!({
            "command": self.command,
            "input": self.input,
            "reports": self.reports,
        });
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
        Ok(())
    }
}
