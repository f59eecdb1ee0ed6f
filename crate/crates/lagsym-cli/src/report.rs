use serde::Serialize;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Fail,
    Pass,
    /// Reported without a verdict (e.g. non-exact simulation monitors).
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub target: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Entry {
    pub fn new(target: impl Into<String>, pass: bool) -> Self {
        Entry {
            target: target.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residuals: Vec::new(),
            drift: None,
            detail: None,
            timing_ms: None,
        }
    }

    pub fn info(target: impl Into<String>) -> Self {
        Entry { status: Status::Info, ..Entry::new(target, true) }
    }

    /// Entry whose status is decided by its residuals all being zero.
    pub fn from_residuals(target: impl Into<String>, residuals: Vec<String>) -> Self {
        let pass = residuals.iter().all(|r| r == "0");
        Entry { residuals, ..Entry::new(target, pass) }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        let d = d.into();
        self.detail = Some(match self.detail.take() {
            Some(prev) => format!("{prev}; {d}"),
            None => d,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, results: Vec<Entry>) -> Self {
        let passed = results.iter().filter(|e| e.status == Status::Pass).count();
        let failed = results.iter().filter(|e| e.status == Status::Fail).count();
        Report { command: command.into(), passed, failed, results, simulation: None }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One line per target, failures first, then a summary line.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<&Entry> = self.results.iter().collect();
        rows.sort_by_key(|e| e.status);
        let width = rows.iter().map(|e| e.target.len()).max().unwrap_or(0);
        let mut out = String::new();
        for e in rows {
            let tag = match e.status {
                Status::Fail => "FAIL",
                Status::Pass => "PASS",
                Status::Info => "INFO",
            };
            let mut line = format!("{tag}  {:<width$}", e.target);
            let nonzero: Vec<&String> = e.residuals.iter().filter(|r| *r != "0").collect();
            if !nonzero.is_empty() {
                let _ = write!(line, "  residual: {}", nonzero.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" | "));
            }
            if let Some(d) = e.drift {
                let _ = write!(line, "  drift: {d:.3e}");
            }
            if let Some(d) = &e.detail {
                let _ = write!(line, "  ({d})");
            }
            if let Some(t) = e.timing_ms {
                let _ = write!(line, "  [{t:.1} ms]");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let _ = writeln!(out, "{}: {} passed, {} failed", self.command, self.passed, self.failed);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_campaign_passes() {
        let r = Report::new("verify", vec![]);
        assert!(r.ok());
        assert_eq!(r.to_text(), "verify: 0 passed, 0 failed\n");
    }

    #[test]
    fn failures_are_listed_first() {
        let r = Report::new(
            "verify",
            vec![
                Entry::from_residuals("a", vec!["0".into()]),
                Entry::from_residuals("b", vec!["Hz_s".into()]),
                Entry::info("c"),
            ],
        );
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("FAIL  b"));
        assert!(lines[1].starts_with("PASS  a"));
        assert!(lines[2].starts_with("INFO  c"));
        assert_eq!((r.passed, r.failed), (1, 1));
        assert!(!r.ok());
        let json = r.to_json();
        assert!(json.find("\"a\"").unwrap() < json.find("\"b\"").unwrap());
    }
}
