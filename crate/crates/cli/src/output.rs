//! Report rendering.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render<T: Serialize>(report: &T, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Parse(format!("serializing report: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let value = serde_json::to_value(report)
                .map_err(|e| CliError::Parse(format!("serializing report: {e}")))?;
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["key", "value"]).map_err(io)?;
            for (k, v) in rows {
                w.write_record([k, v]).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Dotted-path `key,value` pairs; array elements are keyed by index.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
