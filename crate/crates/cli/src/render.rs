//! JSON and aligned-table output.

use serde_json::Value;

use crate::Format;

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize"),
        Format::Table => table(v),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_records(v: &Value) -> bool {
    matches!(v, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object))
}

fn align(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |j: usize| {
        rows.iter()
            .map(|r| r[j].chars().count())
            .chain([header[j].chars().count()])
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let line = |r: &[String]| {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header)];
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n")
}

fn records(a: &[Value]) -> String {
    let mut header: Vec<String> = Vec::new();
    for r in a {
        for k in r.as_object().expect("records are objects").keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let rows: Vec<Vec<String>> = a.iter().map(|r| header.iter().map(|k| cell(&r[k])).collect()).collect();
    align(&header, &rows)
}

/// Objects print as `key  value` lines, with arrays of objects as nested
/// tables; arrays of objects print as one row per element.
pub fn table(v: &Value) -> String {
    match v {
        Value::Array(a) if is_records(v) => records(a),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join("\n"),
        Value::Object(m) => {
            let mut scalars = Vec::new();
            let mut nested = Vec::new();
            for (k, x) in m {
                if is_records(x) {
                    nested.push(format!("{k}:\n{}", table(x)));
                } else {
                    scalars.push(vec![k.clone(), cell(x)]);
                }
            }
            let mut parts = Vec::new();
            if !scalars.is_empty() {
                parts.push(align(&["key".into(), "value".into()], &scalars));
            }
            parts.extend(nested);
            parts.join("\n\n")
        }
        other => cell(other),
    }
}
