//! Report writers: the JSON summary and the per-verdict CSV.
//!
//! Report floats use the shortest decimal that round-trips.

use std::io::Write;
use std::path::Path;

use crate::campaign::{CampaignReport, Row};

pub const CSV_HEADER: [&str; 15] = [
    "theorem_id",
    "a",
    "b",
    "p",
    "alpha",
    "lhs",
    "mid",
    "rhs",
    "slack_left",
    "slack_right",
    "holds",
    "fn_descriptor",
    "weight_descriptor",
    "seed",
    "instance_index",
];

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

/// Serialises the rows as CSV.
pub fn csv_bytes(rows: &[Row]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let v = &row.verdict;
        w.write_record([
            v.theorem_id.as_str().to_string(),
            num(v.a),
            num(v.b),
            opt(v.p),
            opt(v.alpha),
            num(v.lhs),
            opt(v.mid),
            num(v.rhs),
            opt(v.slack_left),
            num(v.slack_right),
            v.holds.to_string(),
            row.fn_descriptor.to_string(),
            row.weight_descriptor.as_deref().unwrap_or("").to_string(),
            row.seed.to_string(),
            row.instance_index.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn json_string(report: &CampaignReport) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(bytes)?;
    f.flush()
}
