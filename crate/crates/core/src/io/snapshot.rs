//! Labeled holder snapshot.
//!
//! ```text
//! #symbol=FDUSD
//! #total_supply=1628000000
//! #taken_at=2025-05-31
//! #top_n=1000
//! #label_source=...        (optional)
//! address,balance,category
//! 0xabc...,12345,Exchange
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::downstream::{Holder, HolderSnapshot};
use crate::error::{Error, Result};
use crate::io::{csv_field, parse_date, parse_f64, read_csv};
use crate::model::HolderCategory;

const HEADER: [&str; 3] = ["address", "balance", "category"];

pub fn parse_holder_snapshot(text: &str, source: &str) -> Result<HolderSnapshot> {
    let mut symbol = None;
    let mut total_supply = None;
    let mut taken_at = None;
    let mut top_n = None;
    let mut label_source = None;

    let mut preamble_lines = 0;
    let mut body_start = 0;
    for raw in text.split_inclusive('\n') {
        let line_no = preamble_lines + 1;
        let Some(meta) = raw.trim_end_matches(['\n', '\r']).strip_prefix('#') else {
            break;
        };
        let (key, value) = meta.split_once('=').ok_or_else(|| {
            Error::parse(
                source,
                line_no,
                format!("preamble line '#{meta}' lacks '='"),
            )
        })?;
        let value = value.trim();
        let slot_taken = match key.trim() {
            "symbol" => symbol.replace(value.to_string()).is_some(),
            "total_supply" => total_supply
                .replace(parse_f64(source, line_no, "total_supply", value)?)
                .is_some(),
            "taken_at" => taken_at
                .replace(parse_date(source, line_no, "taken_at", value)?)
                .is_some(),
            "top_n" => top_n
                .replace(value.parse::<usize>().map_err(|_| {
                    Error::parse(source, line_no, format!("top_n: '{value}' is not a count"))
                })?)
                .is_some(),
            "label_source" => label_source.replace(value.to_string()).is_some(),
            other => {
                return Err(Error::parse(
                    source,
                    line_no,
                    format!(
                        "unknown preamble key '{other}' (valid: symbol, total_supply, taken_at, top_n, label_source)"
                    ),
                ))
            }
        };
        if slot_taken {
            return Err(Error::parse(
                source,
                line_no,
                format!("preamble key '{}' repeated", key.trim()),
            ));
        }
        preamble_lines += 1;
        body_start += raw.len();
    }
    let missing = |key: &str| {
        Error::parse(
            source,
            preamble_lines + 1,
            format!("preamble lacks required '#{key}='"),
        )
    };
    let symbol = symbol
        .filter(|s| !s.is_empty())
        .ok_or_else(|| missing("symbol"))?;
    let total_supply = total_supply.ok_or_else(|| missing("total_supply"))?;
    let taken_at = taken_at.ok_or_else(|| missing("taken_at"))?;
    let top_n = top_n.ok_or_else(|| missing("top_n"))?;

    let csv = read_csv(&text[body_start..], source, &HEADER, preamble_lines)?;
    let mut seen = BTreeSet::new();
    let mut holders = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        let address = row[0].clone();
        if address.is_empty() {
            return Err(Error::parse(source, *line, "empty address"));
        }
        let balance = parse_f64(source, *line, "balance", &row[1])?;
        if balance <= 0.0 {
            return Err(Error::parse(
                source,
                *line,
                format!("nonpositive balance {balance}"),
            ));
        }
        let category: HolderCategory = row[2]
            .parse()
            .map_err(|e: Error| Error::parse(source, *line, e.to_string()))?;
        if !seen.insert(address.clone()) {
            return Err(Error::parse(
                source,
                *line,
                format!("duplicate address {address}"),
            ));
        }
        holders.push(Holder {
            address,
            balance,
            category,
        });
    }
    let snapshot = HolderSnapshot {
        symbol,
        taken_at,
        total_supply,
        holders,
        top_n,
        label_source,
    };
    snapshot.validate()?;
    Ok(snapshot)
}

pub fn write_holder_snapshot(s: &HolderSnapshot) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#symbol={}", s.symbol);
    let _ = writeln!(out, "#total_supply={}", s.total_supply);
    let _ = writeln!(out, "#taken_at={}", s.taken_at);
    let _ = writeln!(out, "#top_n={}", s.top_n);
    if let Some(src) = &s.label_source {
        let _ = writeln!(out, "#label_source={src}");
    }
    out.push_str("address,balance,category\n");
    for h in &s.holders {
        let _ = writeln!(
            out,
            "{},{},{}",
            csv_field(&h.address),
            h.balance,
            h.category
        );
    }
    out
}
