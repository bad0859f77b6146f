//! CSV, SVG and JSON artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use railyard_core::frozenboundary::ParametricCurve;

use crate::CliError;

/// 17 significant digits: enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table kept in memory, written in one go.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Run(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
    }
}

/// Output directory, created on demand.
pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(path)?;
        Ok(OutDir(path.to_path_buf()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let p = self.path(name);
        fs::write(&p, contents)?;
        Ok(p)
    }

    pub fn csv(&self, name: &str, t: &Table) -> Result<PathBuf, CliError> {
        self.write(name, &t.to_csv()?)
    }

    pub fn json<T: serde::Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        self.write(name, &(serde_json::to_string_pretty(value)? + "\n"))
    }
}

const COLORS: [&str; 6] = [
    "#1f4e9c", "#b8341b", "#2b8a3e", "#7b3fa0", "#c77c02", "#333333",
];

/// Plain SVG 1.1 of (χ, κ) curves: one polyline per branch, one colour
/// per curve, κ pointing up.
pub fn svg(curves: &[&ParametricCurve], width: f64, height: f64) -> String {
    let margin = 20.0;
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for c in curves {
        if c.samples.is_empty() {
            continue;
        }
        let b = c.bounding_box();
        x0 = x0.min(b.0);
        x1 = x1.max(b.1);
        y0 = y0.min(b.2);
        y1 = y1.max(b.3);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let sx = (width - 2.0 * margin) / (x1 - x0).max(1e-12);
    let sy = (height - 2.0 * margin) / (y1 - y0).max(1e-12);
    let mut out = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (ci, c) in curves.iter().enumerate() {
        for branch in c.branches() {
            if branch.len() < 2 {
                continue;
            }
            let pts: Vec<String> = branch
                .iter()
                .map(|s| {
                    format!(
                        "{:.3},{:.3}",
                        margin + (s.chi - x0) * sx,
                        height - margin - (s.kappa - y0) * sy
                    )
                })
                .collect();
            out += &format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                COLORS[ci % COLORS.len()],
                pts.join(" ")
            );
        }
    }
    out += "</svg>\n";
    out
}
