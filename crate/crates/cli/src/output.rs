use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Writes the config header and then one record per line.
pub struct Sink<W: Write> {
    format: Format,
    out: W,
    columns: Option<Vec<String>>,
}

impl<W: Write> Sink<W> {
    pub fn new(format: Format, out: W) -> Self {
        Sink {
            format,
            out,
            columns: None,
        }
    }

    pub fn header(&mut self, config: &Value) -> io::Result<()> {
        let line = serde_json::to_string(&serde_json::json!({ "config": config }))?;
        match self.format {
            Format::Json => writeln!(self.out, "{line}"),
            Format::Csv => writeln!(self.out, "# {line}"),
        }
    }

    pub fn record(&mut self, record: &Value) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", serde_json::to_string(record)?),
            Format::Csv => {
                let mut flat = Vec::new();
                flatten("", record, &mut flat);
                let keys: Vec<String> = flat.iter().map(|(k, _)| k.clone()).collect();
                let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
                if self.columns.as_ref() != Some(&keys) {
                    w.write_record(&keys).map_err(io::Error::other)?;
                    self.columns = Some(keys);
                }
                w.write_record(flat.iter().map(|(_, v)| v)).map_err(io::Error::other)?;
                let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
                self.out.write_all(&bytes)
            }
        }
    }
}

/// Dotted keys for nested objects; arrays and scalars become cells.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Serialize anything into a JSON object, for adding fields.
pub fn object<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("records serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_flattens_and_repeats_header_on_shape_change() {
        let mut buf = Vec::new();
        {
            let mut s = Sink::new(Format::Csv, &mut buf);
            s.record(&serde_json::json!({"n": 2, "v": {"a": "1/2"}})).unwrap();
            s.record(&serde_json::json!({"n": 3, "v": {"a": "1/3"}})).unwrap();
            s.record(&serde_json::json!({"limit": "0"})).unwrap();
        }
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,v.a\n2,1/2\n3,1/3\nlimit\n0\n");
    }
}
