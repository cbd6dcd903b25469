//! CSV and JSON emission of sweep results.
//!
//! CSV files start with `# key: value` metadata lines followed by a header
//! row. Numbers are written with 17 significant digits so that re-reading
//! reproduces every value bit for bit; failed points leave their numeric
//! fields empty (CSV) or `null` (JSON).

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::cli::config::OutputFormat;
use crate::cli::sweep::{SweepResult, SweepRow};
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 9] = [
    "omega_A_rad_s",
    "omega_B_rad_s",
    "omega_A_over_omega0",
    "E_J",
    "E0_J",
    "deltaE_J",
    "F_N",
    "deltaF_fN",
    "error",
];

/// The CSV header row.
pub fn csv_header() -> String {
    COLUMNS.join(",")
}

fn number_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

fn values(row: &SweepRow) -> [f64; 8] {
    [
        row.omega_a,
        row.omega_b,
        row.omega_a_over_omega0,
        row.energy,
        row.energy0,
        row.delta_energy,
        row.force,
        row.delta_force_fn,
    ]
}

fn format_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    for (k, v) in &result.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for row in &result.rows {
        let mut record: Vec<String> = values(row).iter().map(|&x| number_text(x)).collect();
        record.push(row.error.clone().unwrap_or_default());
        w.write_record(&record).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    out
}

pub fn to_json(result: &SweepResult) -> String {
    let metadata: Map<String, Value> = result
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, x) in COLUMNS.iter().zip(values(row)) {
                let v = if x.is_finite() {
                    Value::Number(number_text(x).parse::<Number>().expect("valid number"))
                } else {
                    Value::Null
                };
                obj.insert((*name).to_string(), v);
            }
            obj.insert(
                "error".into(),
                row.error.clone().map_or(Value::Null, Value::String),
            );
            Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "metadata": metadata,
        "columns": COLUMNS,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serialises");
    s.push('\n');
    s
}

pub fn render(result: &SweepResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv(result),
        OutputFormat::Json => to_json(result),
    }
}

/// Write `result` to `path`, or to stdout when `path` is `None`.
pub fn emit(result: &SweepResult, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let text = render(result, format);
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn parse_field(path: &Path, line: usize, column: &str, text: &str) -> Result<f64> {
    if text.is_empty() {
        return Ok(f64::NAN);
    }
    text.parse()
        .map_err(|_| format_error(path, format!("row {line}, column {column}: bad number `{text}`")))
}

fn row_from(values: [f64; 8], error: Option<String>) -> SweepRow {
    SweepRow {
        omega_a: values[0],
        omega_b: values[1],
        omega_a_over_omega0: values[2],
        energy: values[3],
        energy0: values[4],
        delta_energy: values[5],
        force: values[6],
        delta_force_fn: values[7],
        error,
    }
}

/// Parse a CSV file written by [`emit`].
pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut metadata = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix("# ") {
            Some(m) => {
                let (k, v) = m
                    .split_once(": ")
                    .ok_or_else(|| format_error(path, format!("bad metadata line `{line}`")))?;
                metadata.push((k.to_string(), v.to_string()));
            }
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| format_error(path, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != COLUMNS {
        return Err(format_error(path, format!("unexpected header {}", header.join(","))));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_error(path, e.to_string()))?;
        let mut v = [0.0; 8];
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = parse_field(path, i + 1, COLUMNS[j], &record[j])?;
        }
        let error = Some(record[8].to_string()).filter(|e| !e.is_empty());
        rows.push(row_from(v, error));
    }
    Ok(SweepResult { metadata, rows })
}

/// Parse a JSON file written by [`emit`].
pub fn read_json(path: &Path) -> Result<SweepResult> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format_error(path, e.to_string()))?;
    let metadata = doc["metadata"]
        .as_object()
        .ok_or_else(|| format_error(path, "missing `metadata` object"))?
        .iter()
        .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
        .collect();
    let mut rows = Vec::new();
    for (i, row) in doc["rows"]
        .as_array()
        .ok_or_else(|| format_error(path, "missing `rows` array"))?
        .iter()
        .enumerate()
    {
        let mut v = [0.0; 8];
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = match &row[COLUMNS[j]] {
                Value::Null => f64::NAN,
                Value::Number(n) => n.as_f64().unwrap_or(f64::NAN),
                other => {
                    return Err(format_error(
                        path,
                        format!("row {}, column {}: expected a number, got {other}", i + 1, COLUMNS[j]),
                    ))
                }
            };
        }
        let error = row["error"].as_str().map(str::to_string);
        rows.push(row_from(v, error));
    }
    Ok(SweepResult { metadata, rows })
}
