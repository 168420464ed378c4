use std::process::ExitCode;

use qca_core::examples::Report;
use qca_core::Error;
use serde_json::{json, Value};

use crate::Format;

/// What a command prints, in both formats, and whether it succeeded.
pub struct Outcome {
    pub text: String,
    pub machine: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(text: impl Into<String>, machine: Value) -> Self {
        Self { text: text.into(), machine, ok: true }
    }

    /// One line per report, plus a total; fails if any report failed.
    pub fn from_reports(suite: &str, reports: Vec<Report>) -> Self {
        let ok = reports.iter().all(Report::ok);
        let passed: usize = reports.iter().map(|r| r.passed).sum();
        let failed: usize = reports.iter().map(|r| r.failed).sum();
        let mut text: Vec<String> = reports.iter().map(ToString::to_string).collect();
        text.push(format!("{} {suite}: {passed} passed, {failed} failed", if ok { "PASS" } else { "FAIL" }));
        let first = reports.iter().find_map(|r| r.first_failure.as_ref().map(|f| format!("[{}] {f}", r.name)));
        let machine = json!({
            "suite": suite,
            "ok": ok,
            "passed": passed,
            "failed": failed,
            "first_failure": first,
            "reports": reports,
        });
        Self { text: text.join("\n"), machine, ok }
    }

    pub fn emit(self, format: Format) -> ExitCode {
        match format {
            Format::Text => println!("{}", self.text),
            Format::Machine => println!("{}", self.machine),
        }
        if self.ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

pub fn emit_error(format: Format, e: &Error) -> ExitCode {
    match format {
        Format::Text => eprintln!("qca: {e}"),
        Format::Machine => println!("{}", json!({ "ok": false, "error": e.to_string() })),
    }
    ExitCode::from(2)
}
