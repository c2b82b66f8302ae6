//! Structured "key: value" report text.
//!
//! Every line a command prints (other than file payloads and bench CSV) is
//! one `key: value` pair. The parser here is the round-trip guarantee: any
//! report the tool emits can be read back into the same ordered pairs.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportError {
    MissingSeparator { line: usize },
    EmptyKey { line: usize },
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportError::MissingSeparator { line } => {
                write!(f, "line {line}: expected \"key: value\"")
            }
            ReportError::EmptyKey { line } => write!(f, "line {line}: empty key"),
        }
    }
}

impl std::error::Error for ReportError {}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Keys must not contain ':' or newlines; values must not contain
    /// newlines. Both are enforced here so emitted text always parses.
    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        let key = key.into();
        let value = value.to_string();
        assert!(!key.is_empty() && !key.contains(':') && !key.contains('\n'));
        assert!(!value.contains('\n'));
        self.entries.push((key, value));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Report, ReportError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(": ")
                .or_else(|| line.split_once(':'))
                .ok_or(ReportError::MissingSeparator { line: i + 1 })?;
            if key.is_empty() {
                return Err(ReportError::EmptyKey { line: i + 1 });
            }
            entries.push((key.to_owned(), value.to_owned()));
        }
        Ok(Report { entries })
    }
}
