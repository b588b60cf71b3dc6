//! Security-incident dataset and its root-cause histogram.
//!
//! CSV columns: `no,project,stablecoin,blockchain,year,loss_usd,root_causes`,
//! with `root_causes` a `;`-separated list of impact-object names.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{csv_field, fixed, parse_f64, read_csv};
use crate::model::ImpactObjectName;

const HEADER: [&str; 7] = [
    "no",
    "project",
    "stablecoin",
    "blockchain",
    "year",
    "loss_usd",
    "root_causes",
];

/// Losses at or below this many USD are not admitted.
pub const MIN_LOSS_USD: f64 = 100_000.0;
pub const MIN_YEAR: i32 = 2017;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidentRecord {
    pub no: u32,
    pub project: String,
    pub stablecoin: String,
    pub blockchain: String,
    pub year: i32,
    pub loss_usd: f64,
    pub root_causes: BTreeSet<ImpactObjectName>,
}

pub fn parse_incidents(text: &str, source: &str) -> Result<Vec<IncidentRecord>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let csv = read_csv(text, source, &HEADER, 0)?;
    let mut out = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        let line = *line;
        let no: u32 = row[0]
            .parse()
            .map_err(|_| Error::parse(source, line, format!("no: '{}' is not a count", row[0])))?;
        let year: i32 = row[4]
            .parse()
            .map_err(|_| Error::parse(source, line, format!("year: '{}' is not a year", row[4])))?;
        if year < MIN_YEAR {
            return Err(Error::parse(
                source,
                line,
                format!("year {year} precedes {MIN_YEAR}"),
            ));
        }
        let loss_usd = parse_f64(source, line, "loss_usd", &row[5])?;
        if loss_usd <= MIN_LOSS_USD {
            return Err(Error::parse(
                source,
                line,
                format!("loss {loss_usd} USD does not exceed the 100K admission floor"),
            ));
        }
        let mut root_causes = BTreeSet::new();
        for raw in row[6].split(';').map(str::trim) {
            if raw.is_empty() {
                continue;
            }
            let cause: ImpactObjectName = raw.parse().map_err(|_| {
                let valid: Vec<&str> = ImpactObjectName::ALL.iter().map(|n| n.as_str()).collect();
                Error::parse(
                    source,
                    line,
                    format!("unknown root cause '{raw}' (valid: {})", valid.join(", ")),
                )
            })?;
            if !root_causes.insert(cause) {
                return Err(Error::parse(
                    source,
                    line,
                    format!("root cause {cause} repeated"),
                ));
            }
        }
        if root_causes.is_empty() {
            return Err(Error::parse(source, line, "no root cause listed"));
        }
        for (field, v) in [
            ("project", &row[1]),
            ("stablecoin", &row[2]),
            ("blockchain", &row[3]),
        ] {
            if v.is_empty() {
                return Err(Error::parse(source, line, format!("empty {field}")));
            }
        }
        out.push(IncidentRecord {
            no,
            project: row[1].clone(),
            stablecoin: row[2].clone(),
            blockchain: row[3].clone(),
            year,
            loss_usd,
            root_causes,
        });
    }
    Ok(out)
}

pub fn write_incidents(records: &[IncidentRecord]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in records {
        let causes: Vec<&str> = r.root_causes.iter().map(|c| c.as_str()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.no,
            csv_field(&r.project),
            csv_field(&r.stablecoin),
            csv_field(&r.blockchain),
            r.year,
            r.loss_usd,
            causes.join(";")
        );
    }
    out
}

/// Per-cause incident counts. An incident listing several causes counts once
/// for each; percentages are over the number of incidents, so they may sum
/// past 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauseHistogram {
    pub incidents: usize,
    pub counts: BTreeMap<ImpactObjectName, usize>,
}

impl CauseHistogram {
    pub fn percent(&self, cause: ImpactObjectName) -> f64 {
        if self.incidents == 0 {
            return 0.0;
        }
        100.0 * self.counts.get(&cause).copied().unwrap_or(0) as f64 / self.incidents as f64
    }

    /// Causes with a nonzero count, most frequent first; ties keep the
    /// canonical object order.
    pub fn ranked(&self) -> Vec<(ImpactObjectName, usize)> {
        let mut v: Vec<_> = ImpactObjectName::ALL
            .iter()
            .filter_map(|n| self.counts.get(n).map(|&c| (*n, c)))
            .filter(|&(_, c)| c > 0)
            .collect();
        v.sort_by_key(|e| std::cmp::Reverse(e.1));
        v
    }
}

pub fn cause_histogram(records: &[IncidentRecord]) -> CauseHistogram {
    let mut counts = BTreeMap::new();
    for r in records {
        for c in &r.root_causes {
            *counts.entry(*c).or_insert(0) += 1;
        }
    }
    CauseHistogram {
        incidents: records.len(),
        counts,
    }
}

pub fn write_histogram_csv(h: &CauseHistogram) -> String {
    let mut out = String::from("cause,count,percent\n");
    for (cause, count) in h.ranked() {
        let _ = writeln!(out, "{cause},{count},{}", fixed(h.percent(cause), 2));
    }
    out
}

pub fn write_histogram_md(h: &CauseHistogram) -> String {
    let mut out = String::from("| Root cause | Incidents | Share (%) |\n|---|---:|---:|\n");
    for (cause, count) in h.ranked() {
        let _ = writeln!(
            out,
            "| {} | {count} | {} |",
            cause.label(),
            fixed(h.percent(cause), 2)
        );
    }
    let _ = writeln!(
        out,
        "\nIncidents: {}. Each incident counts once per listed root cause.",
        h.incidents
    );
    out
}

/// Inverse of [`write_histogram_csv`] for counts; the incident total is not
/// in the CSV and must be supplied.
pub fn parse_histogram_csv(text: &str, source: &str, incidents: usize) -> Result<CauseHistogram> {
    let csv = read_csv(text, source, &["cause", "count", "percent"], 0)?;
    let mut counts = BTreeMap::new();
    for (line, row) in &csv.rows {
        let cause: ImpactObjectName = row[0]
            .parse()
            .map_err(|e: Error| Error::parse(source, *line, e.to_string()))?;
        let count: usize = row[1].parse().map_err(|_| {
            Error::parse(source, *line, format!("count: '{}' is not a count", row[1]))
        })?;
        if counts.insert(cause, count).is_some() {
            return Err(Error::parse(
                source,
                *line,
                format!("cause {cause} repeated"),
            ));
        }
    }
    Ok(CauseHistogram { incidents, counts })
}
