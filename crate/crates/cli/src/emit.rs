//! Rendering a command result as JSON, CSV or text.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::OutputFormat;
use crate::numfmt::{sig17, Sig17Formatter};

/// Rows for CSV output; the JSON body carries the same data.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub body: Value,
    pub table: Option<Table>,
}

impl Document {
    pub fn new(body: impl Serialize) -> Self {
        Document {
            body: serde_json::to_value(body).expect("command output is plain data"),
            table: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(&self.body),
            OutputFormat::Csv => match &self.table {
                Some(t) => table_csv(t),
                None => flat_csv(&self.body),
            },
            OutputFormat::Text => flat_text(&self.body),
        }
    }
}

pub fn to_json(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter::new());
    v.serialize(&mut ser).expect("writing to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (None, Some(i), _) => i.to_string(),
            (_, _, Some(x)) => sig17(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Leaves of `v` as `(dotted.path, value)`; array indices become path
/// segments.
fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(a) => a
                .iter()
                .enumerate()
                .for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            leaf => out.push((prefix.to_string(), scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
}

fn table_csv(t: &Table) -> String {
    csv_string(|w| {
        w.write_record(&t.columns)?;
        for row in &t.rows {
            w.write_record(row.iter().map(scalar))?;
        }
        Ok(())
    })
}

fn flat_csv(v: &Value) -> String {
    csv_string(|w| {
        w.write_record(["key", "value"])?;
        for (k, x) in flatten(v) {
            w.write_record([k, x])?;
        }
        Ok(())
    })
}

fn flat_text(v: &Value) -> String {
    let rows = flatten(v);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.into_iter()
        .map(|(k, x)| format!("{k:width$}  {x}\n"))
        .collect()
}

/// `{"error": {"code": ..., "message": ...}}`.
pub fn error_document(code: &str, message: &str) -> Document {
    let mut inner = Map::new();
    inner.insert("code".into(), Value::from(code));
    inner.insert("message".into(), Value::from(message));
    let mut outer = Map::new();
    outer.insert("error".into(), Value::Object(inner));
    Document {
        body: Value::Object(outer),
        table: None,
    }
}
