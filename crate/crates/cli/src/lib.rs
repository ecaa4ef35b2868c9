//! File formats and report serialization for the `lorentz-wishart` binary.
//!
//! Observations are CSV with header `lambda,w_1,...,w_m`. Cone points in
//! JSON are `{"lambda": .., "w": [..]}` and group elements
//! `{"a": .., "A": [[..], ..]}`. Every float is written with 17 significant
//! digits.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use lorentz_wishart::hypothesis::{EqualityTestResult, SubconeTestResult};
use lorentz_wishart::linalg::Matrix;
use lorentz_wishart::verify::CheckReport;
use lorentz_wishart::{ConePoint, GroupElement};
use serde_json::{json, Value};

/// Errors from reading or writing the file formats.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    /// Underlying IO failure.
    #[error("{0}")]
    Io(#[from] std::io::Error),
    /// Bad header row.
    #[error("bad header: {0}")]
    Header(String),
    /// Malformed CSV row.
    #[error("line {line}: {message}")]
    Row {
        /// 1-based line number in the file.
        line: u64,
        /// What went wrong.
        message: String,
    },
    /// Dimension disagreement.
    #[error("dimension mismatch: expected m = {expected}, found m = {found}")]
    Dimension {
        /// Expected `m`.
        expected: usize,
        /// Found `m`.
        found: usize,
    },
    /// Malformed JSON.
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// Output format of data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Comma-separated values with a header row.
    Csv,
    /// JSON.
    Json,
}

/// `{:.16e}`, or `inf`/`-inf`/`nan`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Serializes a JSON value, writing floats with 17 significant digits and
/// non-finite floats as `null`.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            out.push_str(&fmt_f64(x));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}:", Value::String(k.clone()));
                write_value(out, item);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// `{"lambda": .., "w": [..]}`.
pub fn cone_point_to_json(x: &ConePoint) -> Value {
    json!({ "lambda": num(x.lambda), "w": x.w.iter().map(|&v| num(v)).collect::<Vec<_>>() })
}

/// Parses `{"lambda": .., "w": [..]}`.
pub fn cone_point_from_json(v: &Value) -> Result<ConePoint, FormatError> {
    let lambda = v
        .get("lambda")
        .and_then(Value::as_f64)
        .ok_or_else(|| FormatError::Json("cone point needs a numeric \"lambda\"".into()))?;
    let w = v
        .get("w")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::Json("cone point needs an array \"w\"".into()))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| FormatError::Json("\"w\" entries must be numbers".into())))
        .collect::<Result<Vec<_>, _>>()?;
    if w.is_empty() {
        return Err(FormatError::Json("\"w\" must have at least one entry".into()));
    }
    Ok(ConePoint::new(lambda, w))
}

/// `{"a": .., "A": [[..], ..]}`.
pub fn group_element_to_json(g: &GroupElement) -> Value {
    let rows: Vec<Value> =
        g.matrix().to_rows().iter().map(|r| Value::Array(r.iter().map(|&v| num(v)).collect())).collect();
    json!({ "a": num(g.a()), "A": rows })
}

/// Parses and validates `{"a": .., "A": [[..], ..]}`.
pub fn group_element_from_json(v: &Value) -> anyhow::Result<GroupElement> {
    let a = v.get("a").and_then(Value::as_f64).ok_or_else(|| FormatError::Json("group element needs \"a\"".into()))?;
    let rows = v
        .get("A")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::Json("group element needs a matrix \"A\"".into()))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| FormatError::Json("\"A\" rows must be arrays".into()))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| FormatError::Json("\"A\" entries must be numbers".into())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = Matrix::from_rows(&rows).ok_or_else(|| FormatError::Json("\"A\" must be square".into()))?;
    Ok(GroupElement::new(a, matrix)?)
}

/// Parses `--sigma`: a JSON literal, or `@path` to a file holding one.
pub fn parse_sigma(arg: &str) -> anyhow::Result<ConePoint> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read sigma file {path}: {e}"))?,
        None => arg.to_string(),
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| FormatError::Json(e.to_string()))?;
    Ok(cone_point_from_json(&v)?)
}

/// Reads observations from CSV with header `lambda,w_1,...,w_m`; `m` is
/// inferred from the header and checked against `expected_m` when given.
pub fn read_observations<R: Read>(reader: R, expected_m: Option<usize>) -> Result<Vec<ConePoint>, FormatError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| FormatError::Header(e.to_string()))?.clone();
    if header.len() < 2 || &header[0] != "lambda" {
        return Err(FormatError::Header("expected lambda,w_1,...,w_m".into()));
    }
    for (i, h) in header.iter().enumerate().skip(1) {
        if h != format!("w_{i}") {
            return Err(FormatError::Header(format!("column {} is {h:?}, expected \"w_{i}\"", i + 1)));
        }
    }
    let m = header.len() - 1;
    if let Some(e) = expected_m {
        if e != m {
            return Err(FormatError::Dimension { expected: e, found: m });
        }
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| FormatError::Row {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != m + 1 {
            return Err(FormatError::Row { line, message: format!("expected {} fields, found {}", m + 1, rec.len()) });
        }
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| FormatError::Row { line, message: format!("not a number: {f:?}") }))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(FormatError::Row { line, message: "non-finite value".into() });
        }
        out.push(ConePoint::new(vals[0], vals[1..].to_vec()));
    }
    Ok(out)
}

/// Reads observations from a file.
pub fn read_observations_file(path: &Path, expected_m: Option<usize>) -> anyhow::Result<Vec<ConePoint>> {
    let f = std::fs::File::open(path).map_err(|e| anyhow::anyhow!("cannot open {}: {e}", path.display()))?;
    read_observations(f, expected_m).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Writes observations as CSV or as a JSON array of cone points.
pub fn write_observations<W: Write>(mut w: W, points: &[ConePoint], format: Format) -> Result<(), FormatError> {
    match format {
        Format::Csv => {
            let m = points.first().map(|p| p.m()).unwrap_or(0);
            let mut line = String::from("lambda");
            for i in 1..=m {
                let _ = write!(line, ",w_{i}");
            }
            writeln!(w, "{line}")?;
            for p in points {
                let mut line = fmt_f64(p.lambda);
                for v in &p.w {
                    line.push(',');
                    line.push_str(&fmt_f64(*v));
                }
                writeln!(w, "{line}")?;
            }
        }
        Format::Json => {
            let v = Value::Array(points.iter().map(cone_point_to_json).collect());
            writeln!(w, "{}", to_json_string(&v))?;
        }
    }
    Ok(())
}

/// Report of (T1).
pub fn t1_report(r: &SubconeTestResult, anomalies: &[String]) -> Value {
    json!({
        "test": "T1",
        "statistic": num(r.m_stat),
        "p_value": num(r.p_value),
        "lr": num(r.q_lr),
        "null_beta": [num(r.beta_params.0), num(r.beta_params.1)],
        "mle": cone_point_to_json(&r.t_stat),
        "eta": num(r.eta),
        "m": r.split.m(),
        "m0": r.split.m0(),
        "anomalies": anomalies,
    })
}

/// Report of (T2).
pub fn t2_report(r: &EqualityTestResult, m: usize, calibration_size: usize, anomalies: &[String]) -> Value {
    json!({
        "test": "T2",
        "statistic": num(r.lr),
        "p_value": num(r.p_value),
        "lr": num(r.lr),
        "eigenvalues": [num(r.eigen.xi1), num(r.eigen.xi2)],
        "mle": cone_point_to_json(&r.pooled_mle),
        "eta": num(r.eta),
        "m": m,
        "m0": Value::Null,
        "calibration_size": calibration_size,
        "anomalies": anomalies,
    })
}

/// One JSON line per check.
pub fn check_report_json(r: &CheckReport) -> Value {
    json!({
        "name": r.name,
        "statistic": num(r.statistic),
        "threshold": num(r.threshold),
        "passed": r.passed,
        "n_samples": r.n_samples,
        "seed": r.seed,
        "details": r.details,
    })
}
