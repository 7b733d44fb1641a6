//! State and observable files.
//!
//! Parsing goes through `serde_json::Value` so every error can name the
//! offending path, e.g. `matrix[0][1]: expected [re, im]`.

use phasegeo::{Complex64, ComplexMatrix, DensityOperator, Observable};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug)]
pub struct StateFile {
    pub dimension: usize,
    pub hbar: f64,
    pub rho: DensityOperator,
}

#[derive(Clone, Debug)]
pub struct NamedObservable {
    pub name: String,
    pub observable: Observable,
}

fn bad(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

fn parse_json(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("{what}: line {} column {}: {e}", e.line(), e.column())))
}

fn parse_complex(v: &Value, path: &str) -> Result<Complex64, CliError> {
    let pair = v.as_array().ok_or_else(|| bad(path, "expected [re, im]"))?;
    if pair.len() != 2 {
        return Err(bad(path, format!("expected [re, im], got {} element(s)", pair.len())));
    }
    let part = |i: usize| {
        pair[i]
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(&format!("{path}[{i}]"), "expected a finite number"))
    };
    Ok(Complex64::new(part(0)?, part(1)?))
}

/// Square `n`×`n` matrix of [re, im] pairs at `path`.
pub fn parse_matrix(v: &Value, n: usize, path: &str) -> Result<ComplexMatrix, CliError> {
    let rows = v.as_array().ok_or_else(|| bad(path, "expected an array of rows"))?;
    if rows.len() != n {
        return Err(bad(path, format!("expected {n} rows, got {}", rows.len())));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| bad(&rp, "expected an array"))?;
        if row.len() != n {
            return Err(bad(&rp, format!("expected {n} entries, got {}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            data.push(parse_complex(z, &format!("{rp}[{j}]"))?);
        }
    }
    ComplexMatrix::new(n, n, data).map_err(|e| bad(path, e))
}

pub fn parse_state(text: &str) -> Result<StateFile, CliError> {
    let v = parse_json(text, "state file")?;
    let obj = v.as_object().ok_or_else(|| bad("state", "expected a JSON object"))?;
    let dimension = obj
        .get("dimension")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad("dimension", "expected a positive integer"))? as usize;
    let hbar = match obj.get("hbar") {
        None | Some(Value::Null) => 1.0,
        Some(h) => h
            .as_f64()
            .filter(|h| h.is_finite() && *h > 0.0)
            .ok_or_else(|| bad("hbar", "expected a positive number"))?,
    };
    let m = obj.get("matrix").ok_or_else(|| bad("matrix", "missing"))?;
    let m = parse_matrix(m, dimension, "matrix")?;
    let rho = DensityOperator::new(m).map_err(|e| bad("matrix", e))?;
    Ok(StateFile { dimension, hbar, rho })
}

pub fn parse_observables(text: &str, dimension: usize) -> Result<Vec<NamedObservable>, CliError> {
    let v = parse_json(text, "observables file")?;
    let list = v
        .get("observables")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("observables", "expected an array"))?;
    let mut out = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        let path = format!("observables[{i}]");
        let name = match item.get("name") {
            Some(Value::String(s)) => s.clone(),
            None => format!("O{i}"),
            Some(_) => return Err(bad(&format!("{path}.name"), "expected a string")),
        };
        let mp = format!("{path}.matrix");
        let m = item.get("matrix").ok_or_else(|| bad(&mp, "missing"))?;
        let m = parse_matrix(m, dimension, &mp)?;
        let observable = Observable::new(m).map_err(|e| bad(&mp, e))?;
        out.push(NamedObservable { name, observable });
    }
    Ok(out)
}

/// [[[re, im], ...], ...]
pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[derive(Serialize)]
struct StateOut<'a> {
    dimension: usize,
    hbar: f64,
    matrix: &'a [Vec<[f64; 2]>],
}

pub fn state_to_json(rho: &DensityOperator, hbar: f64) -> String {
    let matrix = matrix_to_json(rho.matrix());
    serde_json::to_string_pretty(&StateOut {
        dimension: rho.dimension(),
        hbar,
        matrix: &matrix,
    })
    .expect("state serializes")
}
