//! Parsers and writers for every external file format.
//!
//! Parsers reject rather than coerce: a missing field, unknown name or
//! out-of-range value is an error carrying the 1-based physical line. Writers
//! are deterministic and emit numbers either in shortest round-trip form
//! (data files) or at a fixed precision with round-half-even (reports).

pub mod assessments;
pub mod collateral_inputs;
pub mod config;
pub mod incidents;
pub mod manifest;
pub mod prices;
pub mod profiles;
pub mod report;
pub mod snapshot;
pub mod trajectory;

use std::path::Path;

use crate::error::{Error, Result};

/// `x` at `decimals` places, ties to even on the exact binary value. Never
/// prints a negative zero.
pub fn fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Display name for a path in error messages.
pub fn source_name(path: &Path) -> String {
    path.display().to_string()
}

/// Rows of a headed CSV text, each with its physical line number.
/// `line_offset` counts lines consumed before `text` (a preamble).
#[derive(Debug)]
pub(crate) struct CsvRows {
    pub header: Vec<String>,
    pub rows: Vec<(usize, Vec<String>)>,
}

pub(crate) fn read_csv(
    text: &str,
    source: &str,
    expected_header: &[&str],
    line_offset: usize,
) -> Result<CsvRows> {
    read_csv_checked(text, source, line_offset, &expected_header.join(","), |h| {
        h == expected_header
    })
}

/// Like [`read_csv`] with a caller-supplied header test; `expected`
/// describes the accepted header in error messages.
pub(crate) fn read_csv_checked(
    text: &str,
    source: &str,
    line_offset: usize,
    expected: &str,
    header_ok: impl Fn(&[String]) -> bool,
) -> Result<CsvRows> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        None => {
            return Err(Error::parse(
                source,
                line_offset + 1,
                format!("missing header, expected '{expected}'"),
            ))
        }
        Some(r) => r
            .map_err(|e| Error::parse(source, line_offset + 1, e.to_string()))?
            .iter()
            .map(|s| s.trim().to_string())
            .collect(),
    };
    if !header_ok(&header) {
        return Err(Error::parse(
            source,
            line_offset + 1,
            format!(
                "header '{}' does not match expected '{expected}'",
                header.join(",")
            ),
        ));
    }
    // The reader's own line counter skips blank lines; count from bytes.
    // A record's position can point at blank lines preceding it. Positions
    // only move forward, so newlines are counted incrementally.
    let bytes = text.as_bytes();
    let mut scanned = 0usize;
    let mut newlines = 0usize;
    let mut line_at = |byte: u64| {
        let mut at = byte as usize;
        while at < bytes.len() && matches!(bytes[at], b'\n' | b'\r') {
            at += 1;
        }
        if at < scanned {
            scanned = 0;
            newlines = 0;
        }
        newlines += bytes[scanned..at].iter().filter(|&&b| b == b'\n').count();
        scanned = at;
        newlines + 1
    };
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| line_at(p.byte()));
            Error::parse(source, line_offset + line, e.to_string())
        })?;
        let line = line_offset + rec.position().map_or(0, |p| line_at(p.byte()));
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return Err(Error::parse(
                source,
                line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        rows.push((line, rec.iter().map(|s| s.trim().to_string()).collect()));
    }
    Ok(CsvRows { header, rows })
}

pub(crate) fn parse_f64(source: &str, line: usize, field: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::parse(source, line, format!("{field}: '{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(
            source,
            line,
            format!("{field}: '{raw}' is not finite"),
        ));
    }
    Ok(v)
}

pub(crate) fn parse_date(
    source: &str,
    line: usize,
    field: &str,
    raw: &str,
) -> Result<chrono::NaiveDate> {
    chrono::NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|_| {
        Error::parse(
            source,
            line,
            format!("{field}: '{raw}' is not an ISO-8601 date (YYYY-MM-DD)"),
        )
    })
}

/// Quotes a CSV field when needed.
pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rounds_half_to_even() {
        assert_eq!(fixed(0.125, 2), "0.12");
        assert_eq!(fixed(0.375, 2), "0.38");
        assert_eq!(fixed(2.5, 0), "2");
        assert_eq!(fixed(3.5, 0), "4");
        assert_eq!(fixed(-0.00001, 4), "0.0000");
        assert_eq!(fixed(-4.25, 2), "-4.25");
    }

    #[test]
    fn csv_lines_are_physical() {
        let text = "a,b\n1,2\n\n3,4\n";
        let rows = read_csv(text, "t", &["a", "b"], 2).unwrap();
        let lines: Vec<usize> = rows.rows.iter().map(|r| r.0).collect();
        assert_eq!(lines, vec![4, 6]);
        assert!(read_csv("x,b\n", "t", &["a", "b"], 0).is_err());
        assert!(read_csv("", "t", &["a", "b"], 0).is_err());
        match read_csv("a,b\n1,2,3\n", "t", &["a", "b"], 0) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_field_quotes_when_needed() {
        assert_eq!(csv_field("BSC, Arbitrum"), "\"BSC, Arbitrum\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }
}
