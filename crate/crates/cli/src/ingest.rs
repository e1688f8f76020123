use std::path::Path;

use serde::{Deserialize, Serialize};
use subflat::PointSet;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// From the file extension; JSON unless it ends in `.csv`.
    pub fn guess(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
}

/// On-disk instance: points, an optional query and generator metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub points: PointSet<f64>,
    pub query: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        if let Some(q) = &self.query {
            if q.len() != self.dim {
                return Err(subflat::Error::DimensionMismatch { expected: self.dim, found: q.len() }.into());
            }
        }
        Ok(Instance { points: PointSet::new(self.dim, self.points)?, query: self.query })
    }
}

pub fn parse_json(path: &str, text: &str) -> Result<Instance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| CliError::parse(path, e.line(), e.to_string()))?;
    file.into_instance()
}

/// Header `x0,...,x{d-1}`, one point per row.
pub fn parse_csv(path: &str, text: &str) -> Result<Instance> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CliError::parse(path, 1, e.to_string()))?.clone();
    for (i, h) in header.iter().enumerate() {
        if h != format!("x{i}") {
            return Err(CliError::parse(path, 1, format!("expected column x{i}, found {h:?}")));
        }
    }
    let dim = header.len();
    if dim == 0 {
        return Err(CliError::parse(path, 1, "empty header"));
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            CliError::parse(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != dim {
            return Err(CliError::parse(path, line, format!("expected {dim} fields, found {}", record.len())));
        }
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| CliError::parse(path, line, format!("not a number: {f:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        points.push(row);
    }
    Ok(Instance { points: PointSet::new(dim, points)?, query: None })
}

pub fn read_instance(path: &Path, format: Option<Format>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let name = path.display().to_string();
    match format.unwrap_or_else(|| Format::guess(path)) {
        Format::Csv => parse_csv(&name, &text),
        Format::Json => parse_json(&name, &text),
    }
}

/// Shortest decimal that reads back to the same `f64`.
pub fn to_csv(points: &[Vec<f64>]) -> String {
    let dim = points.first().map_or(0, Vec::len);
    let mut out = (0..dim).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    for p in points {
        out.push_str(&p.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(file: &InstanceFile) -> String {
    serde_json::to_string_pretty(file).expect("instance serializes") + "\n"
}

/// Comma-separated coordinates.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: {f:?}"))))
        .collect()
}
