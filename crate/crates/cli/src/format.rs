//! JSON and CSV encodings shared by every subcommand.

use std::fmt::Write as _;

use anyhow::{bail, Context};
use salem_core::algebra::{IntPolynomial, RootData};
use salem_core::seqspace::{CentralVector, Growth, Scalar, Window};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub fn poly_json(f: &IntPolynomial) -> Value {
    json!({ "coeffs": f.coeffs() })
}

pub fn roots_json(r: &RootData) -> Value {
    Value::Array(
        r.roots
            .iter()
            .map(|x| {
                json!({
                    "re": x.value.re,
                    "im": x.value.im,
                    "cls": x.cls.as_str(),
                    "b_re": x.b.re,
                    "b_im": x.b.im,
                })
            })
            .collect(),
    )
}

fn growth_str(g: Growth) -> &'static str {
    match g {
        Growth::Bounded => "bounded",
        Growth::Linear => "linear",
    }
}

pub fn window_json<T: Scalar + Serialize>(w: &Window<T>) -> Value {
    json!({
        "lo": w.lo(),
        "hi": w.hi(),
        "values": w.values(),
        "growth": growth_str(w.growth()),
    })
}

pub fn central_json(c: &CentralVector) -> Value {
    Value::Array(
        c.terms
            .iter()
            .map(|t| json!({ "omega_re": t.omega.re, "omega_im": t.omega.im, "c_re": t.c.re, "c_im": t.c.im }))
            .collect(),
    )
}

/// Compact `"10100101"` when every digit is in `0..=9`, a JSON array otherwise.
pub fn digits_json(d: &[i64]) -> Value {
    if d.iter().all(|x| (0..=9).contains(x)) {
        Value::String(d.iter().map(|x| char::from(b'0' + *x as u8)).collect())
    } else {
        json!(d)
    }
}

#[derive(Deserialize)]
struct WindowIn {
    lo: i64,
    #[serde(default)]
    hi: Option<i64>,
    values: Vec<i64>,
    #[serde(default)]
    growth: Option<String>,
}

/// Integer window from Window JSON, a JSON digit array or a compact digit
/// string starting at `lo`. A leading `@` names a file holding the text.
pub fn parse_window(text: &str, lo: i64) -> anyhow::Result<Window<i64>> {
    let owned;
    let text = match text.strip_prefix('@') {
        Some(path) => {
            owned = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            owned.trim()
        }
        None => text.trim(),
    };
    if text.starts_with('{') {
        let w: WindowIn = serde_json::from_str(text).context("parsing window JSON")?;
        if let Some(hi) = w.hi {
            if hi - w.lo + 1 != w.values.len() as i64 {
                bail!("window JSON: hi = {hi} does not match {} values from lo = {}", w.values.len(), w.lo);
            }
        }
        let growth = match w.growth.as_deref() {
            None | Some("bounded") => Growth::Bounded,
            Some("linear") => Growth::Linear,
            Some(other) => bail!("window JSON: unknown growth {other:?}"),
        };
        return Ok(Window::new(w.lo, w.values, growth));
    }
    if text.starts_with('[') {
        let values: Vec<i64> = serde_json::from_str(text).context("parsing digit array")?;
        return Ok(Window::bounded(lo, values));
    }
    let values = text
        .chars()
        .map(|c| c.to_digit(10).map(i64::from).with_context(|| format!("bad digit {c:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Window::bounded(lo, values))
}

pub fn parse_poly(text: &str) -> anyhow::Result<IntPolynomial> {
    let coeffs = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().with_context(|| format!("bad coefficient {s:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    IntPolynomial::new(coeffs).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Rows of a CSV table, with the provenance comment block in front.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Two-column `key,value` table of the scalar fields of an object.
    pub fn from_scalars(v: &Value) -> Self {
        let mut t = Table::new(vec!["key", "value"]);
        if let Value::Object(map) = v {
            for (k, x) in map {
                match x {
                    Value::Array(_) | Value::Object(_) => continue,
                    Value::String(s) => t.push(vec![k.clone(), s.clone()]),
                    other => t.push(vec![k.clone(), other.to_string()]),
                }
            }
        }
        t
    }

    pub fn render(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
