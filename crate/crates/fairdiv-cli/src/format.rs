//! Text file formats for scenarios and allocations.
//!
//! Scenario files: '#' starts a comment line, the first data line is
//! "n m", followed by n data lines of m whitespace-separated non-negative
//! numbers (integers, decimals, or fractions like "3/7"). Allocation
//! files: one data line of m whitespace-separated 1-based agent indices.
//! Writers are bit-exact: no trailing whitespace, one terminating newline.

use std::fmt;

use fairdiv_core::model::{Allocation, ModelError, Scenario};
use fairdiv_core::rational::{format_rational, parse_rational, ParseRationalError, Rational};
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    MissingHeader,
    BadHeader(String),
    BadNumber { line: usize, token: String, cause: ParseRationalError },
    NegativeValue { line: usize, token: String },
    WrongRowLength { line: usize, expected: usize, found: usize },
    MissingRows { expected: usize, found: usize },
    TrailingData { line: usize },
    EmptyAllocation,
    BadIndex(String),
    Model(ModelError),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::MissingHeader => write!(f, "missing \"n m\" header line"),
            FormatError::BadHeader(h) => write!(f, "bad header line {h:?}; expected \"n m\""),
            FormatError::BadNumber { line, token, cause } => {
                write!(f, "line {line}: cannot parse {token:?}: {cause}")
            }
            FormatError::NegativeValue { line, token } => {
                write!(f, "line {line}: negative value {token:?}")
            }
            FormatError::WrongRowLength { line, expected, found } => {
                write!(f, "line {line}: expected {expected} values, found {found}")
            }
            FormatError::MissingRows { expected, found } => {
                write!(f, "expected {expected} data rows, found {found}")
            }
            FormatError::TrailingData { line } => {
                write!(f, "line {line}: unexpected extra data")
            }
            FormatError::EmptyAllocation => write!(f, "allocation file has no data line"),
            FormatError::BadIndex(tok) => write!(f, "bad agent index {tok:?}"),
            FormatError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<ModelError> for FormatError {
    fn from(e: ModelError) -> Self {
        FormatError::Model(e)
    }
}

/// Data lines with their 1-based position in the original text.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_scenario(text: &str) -> Result<Scenario, FormatError> {
    let mut lines = data_lines(text);
    let (_, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match dims.as_slice() {
        [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
            (Ok(n), Ok(m)) => (n, m),
            _ => return Err(FormatError::BadHeader(header.to_owned())),
        },
        _ => return Err(FormatError::BadHeader(header.to_owned())),
    };

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for _ in 0..n {
        let Some((lineno, line)) = lines.next() else {
            return Err(FormatError::MissingRows { expected: n, found: rows.len() });
        };
        let mut row = Vec::with_capacity(m);
        for token in line.split_whitespace() {
            let v = parse_rational(token).map_err(|cause| FormatError::BadNumber {
                line: lineno,
                token: token.to_owned(),
                cause,
            })?;
            if v.is_negative() {
                return Err(FormatError::NegativeValue {
                    line: lineno,
                    token: token.to_owned(),
                });
            }
            row.push(v);
        }
        if row.len() != m {
            return Err(FormatError::WrongRowLength {
                line: lineno,
                expected: m,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(FormatError::TrailingData { line: lineno });
    }
    Ok(Scenario::new(rows)?)
}

pub fn format_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    if let Some(label) = s.label() {
        out.push_str("# ");
        out.push_str(label);
        out.push('\n');
    }
    out.push_str(&format!("{} {}\n", s.agents(), s.resources()));
    for row in s.rows() {
        let line: Vec<String> = row.iter().map(format_rational).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_allocation(text: &str) -> Result<Allocation, FormatError> {
    let mut lines = data_lines(text);
    let (_, line) = lines.next().ok_or(FormatError::EmptyAllocation)?;
    if let Some((lineno, _)) = lines.next() {
        return Err(FormatError::TrailingData { line: lineno });
    }
    let mut indices = Vec::new();
    for token in line.split_whitespace() {
        let idx: usize = token
            .parse()
            .map_err(|_| FormatError::BadIndex(token.to_owned()))?;
        indices.push(idx);
    }
    Ok(Allocation::from_one_based(&indices)?)
}

pub fn format_allocation(a: &Allocation) -> String {
    let line: Vec<String> = a.one_based().iter().map(usize::to_string).collect();
    let mut out = line.join(" ");
    out.push('\n');
    out
}
