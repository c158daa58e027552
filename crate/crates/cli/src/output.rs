//! Table and sidecar serialization. All numbers go through one shortest
//! round-trip encoder so CSV and JSON runs are byte-reproducible.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::json;

/// Shortest decimal that parses back to exactly `v`.
pub fn fmt_f64(v: f64) -> String {
    debug_assert!(v.is_finite());
    serde_json::Number::from_f64(v)
        .map(|n| n.to_string())
        .unwrap_or_else(|| v.to_string())
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = json!({
            "columns": self.columns,
            "rows": self.rows,
        })
        .to_string();
        text.push('\n');
        text
    }
}

/// Resolved configuration plus derived quantities, written next to the
/// data file as `<output>.meta.json`.
pub fn sidecar_text(config: &BTreeMap<String, String>, derived: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&json!({
        "config": config,
        "derived": derived,
    }))
    .expect("sidecar serialization");
    text.push('\n');
    text
}

pub fn write_text(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

pub fn sidecar_path(output: &Path) -> std::path::PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".meta.json");
    std::path::PathBuf::from(name)
}
