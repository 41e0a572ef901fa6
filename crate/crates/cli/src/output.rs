use std::path::Path;
use std::process::ExitCode;

use adsbend_core::Error;
use serde_json::{json, Value};

/// A failed run: exit status plus the machine-readable record written to stderr.
#[derive(Debug)]
pub struct Failure {
    pub exit: u8,
    pub body: Value,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure { exit: 1, body: json!({ "error": "usage", "message": message }) }
    }

    /// A check that ran to completion but did not hold.
    pub fn check(code: &str, message: String, detail: Value) -> Self {
        Failure { exit: 1, body: json!({ "error": code, "message": message, "detail": detail }) }
    }

    pub fn report(&self) -> ExitCode {
        eprintln!("{}", serde_json::to_string(&self.body).expect("serializable"));
        ExitCode::from(self.exit)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = if matches!(e, Error::NonConvergence { .. }) { 2 } else { 1 };
        Failure { exit, body: json!({ "error": e.code(), "message": e.to_string() }) }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { exit: 1, body: json!({ "error": "io", "message": e.to_string() }) }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { exit: 1, body: json!({ "error": "io", "message": format!("{}: {e}", path.display()) }) })
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Outcome {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn emit_json(path: Option<&Path>, v: &Value) -> Outcome {
    emit(path, &serde_json::to_string_pretty(v).expect("serializable"))
}
