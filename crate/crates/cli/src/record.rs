use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

/// One unit of output. The JSON form is a single line with the fields in
/// declaration order and object keys sorted, so parsing a line and
/// serializing it again reproduces it byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub result: Value,
    pub status: Status,
    pub provenance: String,
}

impl OutputRecord {
    pub fn new(command: impl Into<String>, status: Status, provenance: impl Into<String>) -> Self {
        OutputRecord {
            command: command.into(),
            inputs: BTreeMap::new(),
            result: Value::Null,
            status,
            provenance: provenance.into(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}", self.status, self.command);
        for (k, v) in &self.inputs {
            let _ = write!(out, " {k}={}", scalar(v));
        }
        out.push('\n');
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                match v {
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        let _ = writeln!(out, "  {k}:");
                        for item in items {
                            let _ = writeln!(out, "    - {}", scalar(item));
                        }
                    }
                    Value::Array(items) if items.is_empty() => {
                        let _ = writeln!(out, "  {k}: none");
                    }
                    _ => {
                        let _ = writeln!(out, "  {k}: {}", scalar(v));
                    }
                }
            }
        } else if !self.result.is_null() {
            let _ = writeln!(out, "  {}", scalar(&self.result));
        }
        let _ = writeln!(out, "  ({})", self.provenance);
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
