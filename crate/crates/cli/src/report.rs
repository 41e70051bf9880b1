//! Command output with json, markdown and csv renderings.

use std::fmt::Display;

use anyhow::Result;
use serde_json::{json, Map, Value};

/// Integers and booleans become JSON scalars; everything else stays a string.
fn typed(s: &str) -> Value {
    if let Ok(n) = s.parse::<i64>() {
        json!(n)
    } else if let Ok(b) = s.parse::<bool>() {
        json!(b)
    } else {
        json!(s)
    }
}

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Report {
    command: &'static str,
    fields: Vec<(String, String)>,
    table: Option<Table>,
    /// A one-line result printed in place of the field list.
    pub summary: Option<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            fields: Vec::new(),
            table: None,
            summary: None,
            ok: true,
        }
    }

    pub fn field(&mut self, key: &str, value: impl Display) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn table(&mut self, t: Table) {
        self.table = Some(t);
    }

    pub fn to_json(&self) -> Result<String> {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("ok".into(), json!(self.ok));
        for (k, v) in &self.fields {
            obj.insert(k.clone(), typed(v));
        }
        if let Some(t) = &self.table {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        t.headers
                            .iter()
                            .cloned()
                            .zip(r.iter().map(|c| typed(c)))
                            .collect(),
                    )
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
        }
        Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
    }

    pub fn to_markdown(&self) -> String {
        if let Some(s) = &self.summary {
            return format!("{s}\n");
        }
        let mut out = format!("## {}\n\n", self.command);
        for (k, v) in &self.fields {
            out += &format!("- {k}: {v}\n");
        }
        if let Some(t) = &self.table {
            let esc = |s: &str| s.replace('|', "\\|");
            out += &format!("\n| {} |\n", t.headers.join(" | "));
            out += &format!("|{}\n", "---|".repeat(t.headers.len()));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| esc(c)).collect();
                out += &format!("| {} |\n", cells.join(" | "));
            }
        }
        out
    }

    /// The table if there is one, otherwise `key,value` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                w.write_record(["ok", &self.ok.to_string()])?;
                for (k, v) in &self.fields {
                    w.write_record([k, v])?;
                }
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}
