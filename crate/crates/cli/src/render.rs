use serde_json::{Map, Value};

use crate::commands::{complex_json, Failure, Report, Table};
use crate::config::Format;

pub const SCHEMA_VERSION: u64 = 1;

fn envelope(command: &str, code: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("command".into(), command.into());
    m.insert("code".into(), code.into());
    m
}

fn failure_fields(command: &str, f: &Failure) -> Map<String, Value> {
    let mut m = envelope(command, f.code);
    m.insert("message".into(), f.message.clone().into());
    if let Some(z) = f.estimate {
        m.insert("estimate".into(), complex_json(z));
    }
    if let Some(b) = f.error_bound {
        m.insert("error_bound".into(), b.into());
    }
    m
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Nested values flattened to dotted keys; arrays of scalars stay on one line.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Array(xs) => out.push((prefix.to_string(), xs.iter().map(scalar_text).collect::<Vec<_>>().join(" "))),
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

fn csv_table(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.headers).expect("in-memory write");
    for row in &t.rows {
        w.write_record(row.iter().map(scalar_text)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn csv_pairs(fields: &Map<String, Value>) -> String {
    let mut pairs = Vec::new();
    flatten("", &Value::Object(fields.clone()), &mut pairs);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in pairs {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn human_pairs(fields: &Map<String, Value>, skip: &[&str]) -> String {
    let mut pairs = Vec::new();
    for (k, v) in fields {
        if !skip.contains(&k.as_str()) {
            flatten(k, v, &mut pairs);
        }
    }
    pairs.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn human_table(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(scalar_text).collect()).collect();
    let widths: Vec<usize> = (0..t.headers.len())
        .map(|j| cells.iter().map(|r| r[j].len()).chain([t.headers[j].len()]).max().unwrap_or(0))
        .collect();
    let line = |row: &[String]| {
        let padded: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(&t.headers);
    for row in &cells {
        s += &line(row);
    }
    s
}

pub fn render_report(command: &str, r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut m = envelope(command, "ok");
            m.extend(r.fields.clone());
            serde_json::to_string_pretty(&Value::Object(m)).expect("serialisable") + "\n"
        }
        Format::Csv => match &r.table {
            Some(t) => csv_table(t),
            None => csv_pairs(&r.fields),
        },
        Format::Human => {
            let mut s = format!("command: {command}\n");
            match &r.table {
                Some(t) => {
                    // Table columns already carry the array fields.
                    s += &human_pairs(&r.fields, &["rows", "eigenvalues", "tallies"]);
                    s += "\n";
                    s += &human_table(t);
                }
                None => s += &human_pairs(&r.fields, &[]),
            }
            s
        }
    }
}

pub fn render_failure(command: &str, f: &Failure, format: Format) -> String {
    let m = failure_fields(command, f);
    match format {
        Format::Json => serde_json::to_string_pretty(&Value::Object(m)).expect("serialisable") + "\n",
        Format::Csv => csv_pairs(&m),
        Format::Human => human_pairs(&m, &["schema_version"]),
    }
}
