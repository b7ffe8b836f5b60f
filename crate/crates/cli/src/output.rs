//! Result envelopes and aligned ASCII rendering.

use serde_json::{json, Map, Value};

use mackey_sk::{Matrix, Report};

pub const SCHEMA: &str = "mackey-sk/1";

/// One command's result: JSON fields, a text rendering, and whether every
/// check passed.
pub struct Output {
    pub command: String,
    pub fields: Map<String, Value>,
    pub text: Vec<String>,
    pub passed: bool,
}

impl Output {
    pub fn new(command: &str) -> Self {
        Output {
            command: command.to_string(),
            fields: Map::new(),
            text: Vec::new(),
            passed: true,
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.text.push(s.into());
        self
    }

    /// Key/value lines with keys padded to a common width.
    pub fn pairs(&mut self, rows: &[(&str, String)]) -> &mut Self {
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        for (k, v) in rows {
            self.text.push(format!("{k:<width$}  {v}"));
        }
        self
    }

    pub fn matrix(&mut self, title: &str, m: &Matrix) -> &mut Self {
        self.text.push(format!("{title}:"));
        if m.rows() == 0 || m.cols() == 0 {
            self.text.push(format!("  ({}x{} zero matrix)", m.rows(), m.cols()));
        } else {
            for row in mackey_sk::matrix::render(m).lines() {
                self.text.push(format!("  {row}"));
            }
        }
        self
    }

    /// Records a report, failing the output if any check failed.
    pub fn report(&mut self, key: &str, r: &Report) -> &mut Self {
        self.passed &= r.passed();
        self.fields
            .insert(key.to_string(), serde_json::to_value(r).expect("reports serialize"));
        self.text.extend(r.render().lines().map(str::to_string));
        self
    }

    pub fn json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA));
        out.insert("command".into(), json!(self.command));
        out.insert("status".into(), json!(if self.passed { "pass" } else { "fail" }));
        for (k, v) in &self.fields {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    pub fn table(&self) -> String {
        let mut s = self.text.join("\n");
        s.push('\n');
        s
    }
}

/// Aligned table with a header row.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> Vec<String> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let fmt = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![fmt(header.to_vec())];
    out.push(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    for r in rows {
        out.push(fmt(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(", "))
}
