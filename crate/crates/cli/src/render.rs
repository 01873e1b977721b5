//! Plain-text rendering of a JSON report: aligned key/value blocks, aligned
//! tables for arrays of flat records, one line per long list element.

use serde_json::{Map, Value};

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) if xs.is_empty() => Some("[]".into()),
        Value::Array(xs) if xs.iter().all(|x| matches!(x, Value::Number(_) | Value::Bool(_))) => {
            Some(format!("[{}]", xs.iter().map(|x| scalar(x).expect("scalar")).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(xs) if xs.len() <= 12 && xs.iter().all(|x| x.as_str().is_some_and(|s| s.len() <= 16)) => {
            Some(format!("[{}]", xs.iter().map(|x| x.as_str().expect("string")).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(m) if is_table(m) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            Some(format!("{{{}}}", parts.join(", ")))
        }
        _ => None,
    }
}

/// Degree-indexed tables such as `{"0": 1, "2": 1}` render inline.
fn is_table(m: &Map<String, Value>) -> bool {
    m.iter().all(|(k, v)| k.parse::<i64>().is_ok() && v.is_number())
}

fn flat_record(v: &Value) -> Option<&Map<String, Value>> {
    match v {
        Value::Object(m) if m.values().all(|x| scalar(x).is_some()) => Some(m),
        _ => None,
    }
}

fn table(rows: &[&Map<String, Value>], indent: usize, out: &mut String) {
    let mut headers: Vec<String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !headers.contains(k) {
                headers.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> =
        rows.iter().map(|r| headers.iter().map(|h| r.get(h).and_then(scalar).unwrap_or_default()).collect()).collect();
    grid(&headers, &cells, indent, out);
}

fn grid(headers: &[String], cells: &[Vec<String>], indent: usize, out: &mut String) {
    let cols = headers.len().max(cells.iter().map(Vec::len).max().unwrap_or(0));
    let mut widths = vec![0; cols];
    for row in std::iter::once(headers).chain(cells.iter().map(Vec::as_slice)) {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut line = |row: &[String]| {
        let mut s = " ".repeat(indent);
        for (i, c) in row.iter().enumerate() {
            if i + 1 == row.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  ", w = widths[i]));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    if !headers.is_empty() {
        line(headers);
    }
    for row in cells {
        line(row);
    }
}

fn block(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let width = m.iter().filter(|(_, v)| scalar(v).is_some()).map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    for (k, v) in m {
        if let Some(s) = scalar(v) {
            out.push_str(&format!("{pad}{k:<width$}  {s}\n"));
            continue;
        }
        out.push_str(&format!("{pad}{k}:\n"));
        value(v, indent + 2, out);
    }
}

fn value(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => block(m, indent, out),
        Value::Array(xs) => {
            let records: Option<Vec<_>> = xs.iter().map(flat_record).collect();
            if let Some(rs) = records {
                return table(&rs, indent, out);
            }
            let rows: Option<Vec<Vec<String>>> =
                xs.iter().map(|x| x.as_array().and_then(|r| r.iter().map(scalar).collect())).collect();
            if let Some(rows) = rows {
                return grid(&[], &rows, indent, out);
            }
            for x in xs {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{s}\n")),
                    None => {
                        value(x, indent + 2, out);
                        out.push_str(&format!("{pad}--\n"));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    value(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    #[test]
    fn aligns_blocks_and_tables() {
        let v = json!({
            "object": "P1",
            "ext_table": {"0": 1, "2": 1},
            "rows": [{"a": 1, "bb": "x"}, {"a": 22, "bb": "yy"}],
            "gram": [[2, -1], [-1, 2]],
        });
        let text = render_text(&v);
        assert_eq!(
            text,
            "object     P1\next_table  {0:1, 2:1}\nrows:\n  a   bb\n  1   x\n  22  yy\ngram:\n  2   -1\n  -1  2\n"
        );
    }
}
