use std::fmt::Write;

use serde_json::{json, Map, Value};
use thiserror::Error;

/// Outcome of a command that ran to completion.
pub struct Report {
    holds: bool,
    text: String,
    data: Map<String, Value>,
}

impl Report {
    pub fn done() -> Report {
        Report {
            holds: true,
            text: String::new(),
            data: Map::new(),
        }
    }

    /// A yes/no answer; `false` exits with 1.
    pub fn verdict(holds: bool) -> Report {
        let mut r = Report::done();
        r.holds = holds;
        r.data.insert("holds".into(), Value::Bool(holds));
        r
    }

    pub fn line(mut self, text: impl AsRef<str>) -> Report {
        self.text.push_str(text.as_ref());
        self.text.push('\n');
        self
    }

    pub fn raw(mut self, text: &str) -> Report {
        self.text.push_str(text);
        self
    }

    pub fn lines<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Report {
        for s in items {
            let _ = writeln!(self.text, "{}", s.as_ref());
        }
        self
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Report {
        self.data.insert(key.into(), value.into());
        self
    }

    pub fn code(&self) -> u8 {
        if self.holds {
            0
        } else {
            1
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn to_json(&self, command: &str) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), json!(1));
        out.insert("command".into(), json!(command));
        out.insert("status".into(), json!(if self.holds { "ok" } else { "fails" }));
        out.extend(self.data.clone());
        Value::Object(out)
    }
}

#[derive(Debug, Error)]
pub enum Failure {
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{0}")]
    Input(String),
}

impl Failure {
    pub fn input(e: impl std::fmt::Display) -> Failure {
        Failure::Input(e.to_string())
    }

    pub fn bound(e: impl std::fmt::Display) -> Failure {
        Failure::Inconclusive(e.to_string())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Inconclusive(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let (status, msg) = match self {
            Failure::Inconclusive(m) => ("inconclusive", m),
            Failure::Input(m) => ("input-error", m),
        };
        json!({"schema": 1, "command": command, "status": status, "message": msg})
    }
}
