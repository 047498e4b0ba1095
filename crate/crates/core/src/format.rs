//! Text and JSON renderings of scalars and series.
//!
//! Text output is valid input for [`crate::parse`], so `parse(format(f)) == f`.
//! JSON rationals are `[numerator, denominator]` pairs of decimal strings.

use serde::Serialize;

use crate::scalar::{CycloScalar, Rational};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesRecord {
    pub conductor: u32,
    pub trunc: usize,
    pub coeffs: Vec<(usize, Vec<(String, String)>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarRecord {
    pub conductor: u32,
    pub coeffs: Vec<(String, String)>,
}

fn rational_pair(r: &Rational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

pub fn scalar_record(c: &CycloScalar) -> ScalarRecord {
    let c = c.minimal_form();
    ScalarRecord { conductor: c.conductor(), coeffs: c.coeffs().iter().map(rational_pair).collect() }
}

pub fn series_record(f: &TruncatedSeries) -> SeriesRecord {
    let f = f.simplified();
    SeriesRecord {
        conductor: f.conductor(),
        trunc: f.trunc(),
        coeffs: f.terms().map(|(k, c)| (k, c.coeffs().iter().map(rational_pair).collect())).collect(),
    }
}

pub fn series_text(f: &TruncatedSeries) -> String {
    let mut out = String::new();
    for (k, c) in f.terms() {
        let (neg, body) = c.signed_parts();
        let mono = match k {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        };
        let term = match (body.as_str(), mono.is_empty()) {
            (_, true) => body,
            ("1", false) => mono,
            (_, false) => format!("{body}*{mono}"),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if !out.is_empty() {
        out.push_str(" + ");
    }
    out.push_str(&format!("O(z^{})", f.trunc() + 1));
    out
}

pub fn format_series(f: &TruncatedSeries, mode: OutputMode) -> String {
    match mode {
        OutputMode::Text => series_text(f),
        OutputMode::Json => serde_json::to_string(&series_record(f)).expect("series record serializes"),
    }
}
