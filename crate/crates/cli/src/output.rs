use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::args::Format;

/// A command result in all three renderings.
pub struct Output {
    pub json: Value,
    pub table: Table,
    /// Replaces the aligned table in text mode.
    pub text: Option<String>,
}

impl Output {
    pub fn new(json: Value, table: Table) -> Self {
        Output { json, table, text: None }
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.table.csv(),
            Format::Text => self.text.clone().unwrap_or_else(|| self.table.text()),
        }
    }
}

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    /// One record shown as `key  value` lines in text mode.
    record: bool,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            record: false,
        }
    }

    pub fn record<K: Into<String>>(fields: impl IntoIterator<Item = (K, String)>) -> Self {
        let (headers, row): (Vec<String>, Vec<String>) = fields.into_iter().map(|(k, v)| (k.into(), v)).unzip();
        Table {
            headers,
            rows: vec![row],
            record: true,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        if self.record {
            let width = self.headers.iter().map(|h| h.chars().count()).max().unwrap_or(0);
            for (h, v) in self.headers.iter().zip(&self.rows[0]) {
                out.push_str(&format!("{h:<width$}  {v}\n"));
            }
            return out;
        }
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(&self.headers));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 input")
    }
}

/// Three decimals; `{:.3}` rounds the exact binary value, so decimal ties
/// go to even.
pub fn dec3(x: f64) -> String {
    format!("{x:.3}")
}

pub fn int_str(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

/// `{"num": "...", "den": "...", "value": f64}` for exact rationals.
pub fn rational_json(q: &BigRational) -> Value {
    json!({
        "num": q.numer().to_string(),
        "den": q.denom().to_string(),
        "value": q.to_f64(),
    })
}

/// A rational as `p/q (0.xxx)` in tables.
pub fn rational_text(q: &BigRational) -> String {
    format!("{q} ({})", dec3(q.to_f64().unwrap_or(f64::NAN)))
}
