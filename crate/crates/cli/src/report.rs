use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = "hardy-lab/1";

#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub parameter: &'static str,
    pub half_width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub quadrature: f64,
    pub ratio: f64,
    pub algebraic: f64,
    pub finite_difference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub tolerances: Tolerances,
    pub truncations: Vec<Truncation>,
    pub seed: u64,
}

/// Top-level JSON document of every run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub passed: bool,
    pub results: Vec<Value>,
    pub errors: Vec<String>,
    pub environment: Environment,
}

/// One line of a ratio sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub domain: String,
    pub ineq: String,
    pub p: f64,
    pub band_a: f64,
    pub band_b: f64,
    pub profile: String,
    pub resolution: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
    pub min_weight: Option<f64>,
    pub converged: bool,
}

/// One line of an `fmt-compare` sweep.
#[derive(Debug, Clone, Serialize)]
pub struct FmtSweepRow {
    pub alpha: f64,
    #[serde(rename = "R")]
    pub outer: f64,
    pub n: usize,
    pub samples: usize,
    pub min_margin: f64,
    pub violations: usize,
}

pub enum Body {
    Json(Report),
    Csv(Vec<u8>),
}

pub fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, String> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

pub fn emit(body: &Body, output: Option<&Path>) -> Result<(), String> {
    let bytes = match body {
        Body::Json(r) => {
            let mut b = serde_json::to_vec_pretty(r).map_err(|e| e.to_string())?;
            b.push(b'\n');
            b
        }
        Body::Csv(b) => b.clone(),
    };
    match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    }
}
