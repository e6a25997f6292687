//! Trace and summary serialization.
//!
//! Every number is written with 17 significant digits so that values
//! round-trip exactly; files are written to a temporary sibling and renamed
//! into place.

use std::io::Write;
use std::path::Path;

use restart_core::Trace;
use serde_json::{json, Map, Number, Value};

use crate::error::{BenchError, Result};

pub const TRACE_HEADER: &str = "iter,f,gap,restart,eps_target";

/// `{:.16e}`: 17 significant digits.
pub fn format_number(value: f64) -> String {
    format!("{value:.16e}")
}

fn optional(value: Option<f64>) -> String {
    value.map(format_number).unwrap_or_default()
}

/// JSON number with 17 significant digits; `null` for non-finite values.
pub fn json_number(value: f64) -> Value {
    if !value.is_finite() {
        return Value::Null;
    }
    format_number(value)
        .parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn json_optional(value: Option<f64>) -> Value {
    value.map_or(Value::Null, json_number)
}

pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::with_capacity(64 * (trace.entries.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for e in &trace.entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.iteration,
            format_number(e.value),
            optional(e.gap),
            u8::from(e.restart),
            optional(e.epsilon_target)
        ));
    }
    out
}

/// JSON document with a `metadata` object and one object per entry.
pub fn trace_json(trace: &Trace, metadata: Map<String, Value>) -> String {
    let entries: Vec<Value> = trace
        .entries
        .iter()
        .map(|e| {
            json!({
                "iter": e.iteration,
                "f": json_number(e.value),
                "gap": json_optional(e.gap),
                "restart": e.restart,
                "eps_target": json_optional(e.epsilon_target),
            })
        })
        .collect();
    let doc = json!({ "metadata": Value::Object(metadata), "entries": entries });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Writes `contents` to `path` atomically, creating parent directories.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(|e| BenchError::io(dir, e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| BenchError::io(path, e))?;
    file.persist(path).map_err(|e| BenchError::io(path, e.error))?;
    Ok(())
}
