use serde::Serialize;
use serde_json::{json, Value};

use critlab_core::catalog::SpecError;
use critlab_core::group::GroupError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub validations: Vec<Validation>,
    pub version: &'static str,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: Value) -> Self {
        ReportDocument {
            command: command.to_string(),
            inputs,
            results: Value::Null,
            validations: Vec::new(),
            version: VERSION,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool) {
        self.validations.push(Validation {
            name: name.to_string(),
            passed,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.validations.iter().all(|v| v.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{} (critlab {})\n", self.command, self.version);
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("  {k}: {shown}\n"));
            }
        } else if !self.results.is_null() {
            out.push_str(&format!("  {}\n", self.results));
        }
        for v in &self.validations {
            out.push_str(&format!("  [{}] {}\n", if v.passed { "ok" } else { "FAIL" }, v.name));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Parse,
    Precondition,
    Budget,
    Validation,
    Io,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl ToString) -> Self {
        CliError {
            kind,
            message: message.to_string(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            ErrorKind::Usage => "usage",
            ErrorKind::Parse => "parse",
            ErrorKind::Precondition => "precondition",
            ErrorKind::Budget => "budget_exceeded",
            ErrorKind::Validation => "validation_failed",
            ErrorKind::Io => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Validation => 1,
            ErrorKind::Usage | ErrorKind::Parse | ErrorKind::Precondition | ErrorKind::Io => 2,
            ErrorKind::Budget => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code(), "message": self.message } })
    }
}

pub fn parse_err(e: impl ToString) -> CliError {
    CliError::new(ErrorKind::Parse, e)
}

pub fn precondition(e: impl ToString) -> CliError {
    CliError::new(ErrorKind::Precondition, e)
}

pub fn budget(e: impl ToString) -> CliError {
    CliError::new(ErrorKind::Budget, e)
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderOutOfRange { .. } | GroupError::BudgetExceeded { .. } => budget(e),
            other => precondition(other),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Group(g) => g.into(),
            other => parse_err(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(ErrorKind::Io, e)
    }
}
