//! File formats: matrices as comma-separated rows, signals as one value per
//! line, traces as CSV. All floats are written with 17 significant digits so
//! a round trip through text is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fixrank_core::{Mat, SolverTrace};

use crate::run::CliError;

fn parse_value(token: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    let v: f64 = token.trim().parse().map_err(|_| {
        CliError::Parse(format!(
            "{}:{}: not a number: {:?}",
            path.display(),
            line,
            token.trim()
        ))
    })?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!(
            "{}:{}: non-finite value {}",
            path.display(),
            line,
            v
        )));
    }
    Ok(v)
}

pub fn read_matrix(path: &Path) -> Result<Mat, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split(',') {
            row.push(parse_value(token, path, i + 1)?);
        }
        rows.push(row);
    }
    Mat::from_rows(&rows).map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

pub fn read_signal(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    let mut signal = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        signal.push(parse_value(line, path, i + 1)?);
    }
    if signal.is_empty() {
        return Err(CliError::Parse(format!("{}: empty signal", path.display())));
    }
    Ok(signal)
}

pub fn write_signal(path: &Path, signal: &[f64]) -> Result<(), CliError> {
    let mut out = String::new();
    for v in signal {
        writeln!(out, "{:.16e}", v).expect("in-memory write");
    }
    fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))
}

pub fn write_trace_csv(path: &Path, trace: &SolverTrace) -> Result<(), CliError> {
    let mut out = String::from("iter,objective,feasibility,delta\n");
    for row in &trace.rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e}",
            row.iter, row.objective, row.feasibility, row.delta
        )
        .expect("in-memory write");
    }
    fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))
}
