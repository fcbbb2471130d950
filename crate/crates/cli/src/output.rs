use std::fs::File;
use std::io::Write;
use std::path::Path;

use exwf::TraceRecord;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_CHECKS: u8 = 1;
pub const EXIT_DISJOINT: u8 = 2;
pub const EXIT_NOT_LOCATABLE: u8 = 3;
pub const EXIT_DOMAIN: u8 = 4;
pub const EXIT_BAD_STEP: u8 = 5;
pub const EXIT_USAGE: u8 = 64;

/// A command that did not succeed. In JSON mode `detail` fields are merged
/// into the error document.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    pub detail: Value,
    /// Set when the command already printed its report.
    pub reported: bool,
}

impl Failure {
    pub fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            message: message.into(),
            detail: Value::Null,
            reported: false,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, "usage", message)
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn reported(mut self) -> Self {
        self.reported = true;
        self
    }
}

pub struct Output {
    pub json: bool,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Output { json }
    }

    /// Prints `doc` in JSON mode, or the lines from `human` otherwise.
    pub fn emit<T: Serialize>(&self, doc: &T, human: impl FnOnce() -> Vec<String>) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(doc).expect("reports serialize"));
        } else {
            for line in human() {
                println!("{line}");
            }
        }
    }

    pub fn warn(&self, message: &str) {
        eprintln!("warning: {message}");
    }

    pub fn failure(&self, f: &Failure) {
        eprintln!("error: {}", f.message);
        if self.json && !f.reported {
            let mut doc = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
            if let (Some(map), Value::Object(extra)) = (doc.as_object_mut(), &f.detail) {
                map.extend(extra.clone());
            }
            println!("{}", serde_json::to_string_pretty(&doc).expect("error documents serialize"));
        }
    }
}

/// Writes one JSON line per trace to `path`, replacing the file.
pub fn write_traces(path: Option<&Path>, records: &[TraceRecord]) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let mut file = File::create(path).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    for r in records {
        writeln!(file, "{}", r.to_json_line()).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn arrows(visited: &[String]) -> String {
    visited.join(" -> ")
}
