//! Reports: an ordered list of named values, each tagged with the formula
//! that produced it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A numeric check missed its tolerance.
    Failed,
    /// The input did not parse or validate.
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 2,
            Status::Failed => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub fields: Vec<Field>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Ok,
            fields: Vec::new(),
        }
    }

    /// A report for input that failed to parse or validate.
    pub fn invalid(command: &str, pointer: Option<&str>, message: impl std::fmt::Display) -> Self {
        let mut r = Report::new(command);
        r.status = Status::Invalid;
        r.push(
            "error",
            serde_json::json!({ "pointer": pointer, "message": message.to_string() }),
            None,
        );
        r
    }

    pub fn push(&mut self, name: &str, value: impl Serialize, formula: Option<&str>) {
        let mut value = serde_json::to_value(value).expect("report values serialize");
        positive_zeros(&mut value);
        self.fields.push(Field {
            name: name.to_string(),
            value,
            formula: formula.map(str::to_string),
        });
    }

    /// Records a pass/fail check; any failure marks the report failed.
    pub fn check(&mut self, name: &str, passed: bool, formula: Option<&str>) {
        if !passed && self.status == Status::Ok {
            self.status = Status::Failed;
        }
        self.push(name, passed, formula);
    }

    pub fn field(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.value)
    }

    pub fn exit_code(&self) -> u8 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One `name = value` line per field, values in compact JSON so that the
    /// numbers print exactly as in [`Report::to_json`].
    pub fn to_text(&self) -> String {
        let status = serde_json::to_value(self.status).expect("status serializes");
        let mut s = format!("{}: {}\n", self.command, status.as_str().unwrap_or_default());
        for f in &self.fields {
            let _ = write!(s, "  {} = {}", f.name, f.value);
            if let Some(formula) = &f.formula {
                let _ = write!(s, "    # {formula}");
            }
            s.push('\n');
        }
        s
    }
}

/// `-0.0` prints differently from `0.0` but carries no information here.
fn positive_zeros(value: &mut Value) {
    match value {
        Value::Number(n) if n.as_f64() == Some(0.0) && n.is_f64() => *value = Value::from(0.0),
        Value::Array(items) => items.iter_mut().for_each(positive_zeros),
        Value::Object(map) => map.values_mut().for_each(positive_zeros),
        _ => {}
    }
}
