//! Matrix file formats.
//!
//! Text: a header line `R C` followed by `R` lines of `C` characters in
//! `{0,1}`. Structured: a JSON object `{"columns": [..], "rows": [[..]]}`
//! with each row an array of 0/1 integers.

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::setsystem::{default_labels, SetSystem};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    columns: Vec<String>,
    rows: Vec<Vec<u8>>,
}

pub fn parse_text(input: &str) -> Result<SetSystem> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::input("empty matrix file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::input(format!("bad header {header:?}"))))
        .collect::<Result<_>>()?;
    let [n_rows, n_cols] = dims[..] else {
        return Err(Error::input(format!("header must be `R C`, got {header:?}")));
    };
    let mut rows = Vec::with_capacity(n_rows);
    for (i, line) in lines.enumerate() {
        if i >= n_rows {
            return Err(Error::input(format!("more than {n_rows} rows")));
        }
        let row = BitRow::parse(line)
            .ok_or_else(|| Error::input(format!("row {i} has characters outside {{0,1}}")))?;
        if row.len() != n_cols {
            return Err(Error::input(format!(
                "ragged row {i}: length {}, expected {n_cols}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != n_rows {
        return Err(Error::input(format!("expected {n_rows} rows, found {}", rows.len())));
    }
    SetSystem::new(default_labels(n_cols), rows)
}

pub fn to_text(system: &SetSystem) -> String {
    let mut out = format!("{} {}\n", system.n_rows(), system.n_columns());
    for r in system.rows() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_json(input: &str) -> Result<SetSystem> {
    let doc: MatrixDoc =
        serde_json::from_str(input).map_err(|e| Error::input(format!("bad matrix json: {e}")))?;
    let width = doc.columns.len();
    let rows = doc
        .rows
        .iter()
        .enumerate()
        .map(|(i, bits)| {
            if bits.len() != width {
                return Err(Error::input(format!(
                    "ragged row {i}: length {}, expected {width}",
                    bits.len()
                )));
            }
            bits.iter()
                .map(|&b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(Error::input(format!("row {i} has non-bit value {other}"))),
                })
                .collect::<Result<Vec<bool>>>()
                .map(BitRow::from_bools)
        })
        .collect::<Result<Vec<_>>>()?;
    SetSystem::new(doc.columns, rows)
}

pub fn to_json(system: &SetSystem) -> String {
    let doc = MatrixDoc {
        columns: system.columns().to_vec(),
        rows: system
            .rows()
            .iter()
            .map(|r| r.iter().map(u8::from).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("matrix serializes")
}

/// Picks the structured parser when the input starts with `{`.
pub fn parse_auto(input: &str) -> Result<SetSystem> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}
