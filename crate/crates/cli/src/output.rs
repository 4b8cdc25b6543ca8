//! Rendering of command results as JSON, CSV or an aligned table.

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use tqft::{BigRational, Complex64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Exact value as a rational string plus its decimal approximation.
pub fn exact(q: &BigRational) -> Value {
    json!({
        "value": tqft::rational::to_string(q),
        "decimal": tqft::rational::to_f64(q),
    })
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_list(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn complex_matrix(m: &tqft::ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Prepends the schema tag.
pub fn document(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!("tqft/1"));
    out.insert("command".into(), json!(command));
    match body {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in flatten(doc) {
                s.push_str(&csv_field(&k));
                s.push(',');
                s.push_str(&csv_field(&v));
                s.push('\n');
            }
            s
        }
        Format::Table => {
            let rows = flatten(doc);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter()
                .map(|(k, v)| format!("{k:width$}  {v}\n"))
                .collect()
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn is_leafy(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && !x.is_array())
            || xs.iter().all(|x| matches!(x, Value::Array(p) if p.len() == 2 && p.iter().all(Value::is_number))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(doc: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        if is_leafy(v) {
            out.push((prefix.to_string(), scalar(v)));
            return;
        }
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            _ => unreachable!(),
        }
    }
    let mut out = Vec::new();
    walk("", doc, &mut out);
    out
}
