use std::path::Path;

use serde_json::{json, Value};

pub const EXIT_USAGE: i32 = 64;

/// A structured error printed as `{"error": {kind, message, parameter}}`.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub parameter: Option<String>,
    pub exit: i32,
}

impl Failure {
    pub fn usage(param: &str, message: impl Into<String>) -> Failure {
        Failure { kind: "usage".into(), message: message.into(), parameter: Some(param.into()), exit: EXIT_USAGE }
    }

    pub fn io(param: &str, path: &Path, e: std::io::Error) -> Failure {
        Failure { kind: "io".into(), message: format!("{}: {e}", path.display()), parameter: Some(param.into()), exit: EXIT_USAGE }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message, "parameter": self.parameter } })
    }
}

impl From<drcycle::Error> for Failure {
    fn from(e: drcycle::Error) -> Failure {
        use drcycle::Error as E;
        // Bad input is a usage error; a failed certification or an unsupported
        // operation is a failure of the run itself.
        let exit = match e {
            E::Certification(_) | E::UnsupportedDecoration(_) => 1,
            _ => EXIT_USAGE,
        };
        Failure { kind: e.kind().into(), message: e.to_string(), parameter: e.parameter().map(str::to_string), exit }
    }
}
