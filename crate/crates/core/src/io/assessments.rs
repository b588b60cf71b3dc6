//! Upstream assessment records in long format, one row per (symbol, object):
//! `symbol,as_of,object,metric,evidence`. Also the optional reported-totals
//! table `symbol,reported_total`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::{csv_field, parse_date, parse_f64, read_csv};
use crate::model::ImpactObjectName;
use crate::upstream::AssessmentRecord;

const HEADER: [&str; 5] = ["symbol", "as_of", "object", "metric", "evidence"];
const TOTALS_HEADER: [&str; 2] = ["symbol", "reported_total"];

/// Records in order of each symbol's first row. Every record must carry all
/// eight objects.
pub fn parse_assessments(text: &str, source: &str) -> Result<Vec<AssessmentRecord>> {
    let csv = read_csv(text, source, &HEADER, 0)?;
    let mut records: Vec<AssessmentRecord> = Vec::new();
    let mut first_line: BTreeMap<String, usize> = BTreeMap::new();
    for (line, row) in &csv.rows {
        let symbol = &row[0];
        if symbol.is_empty() {
            return Err(Error::parse(source, *line, "empty symbol"));
        }
        let as_of = parse_date(source, *line, "as_of", &row[1])?;
        let object: ImpactObjectName = row[2]
            .parse()
            .map_err(|e: Error| Error::parse(source, *line, e.to_string()))?;
        let metric = parse_f64(source, *line, "metric", &row[3])?;
        if !(0.0..=1.0).contains(&metric) {
            return Err(Error::parse(
                source,
                *line,
                format!("metric {metric} outside [0,1]"),
            ));
        }
        let idx = match records.iter().position(|r| &r.symbol == symbol) {
            Some(i) => i,
            None => {
                first_line.insert(symbol.clone(), *line);
                records.push(AssessmentRecord {
                    symbol: symbol.clone(),
                    as_of,
                    metrics: BTreeMap::new(),
                    evidence: BTreeMap::new(),
                });
                records.len() - 1
            }
        };
        let rec = &mut records[idx];
        if rec.as_of != as_of {
            return Err(Error::parse(
                source,
                *line,
                format!("{symbol}: as_of {as_of} differs from earlier {}", rec.as_of),
            ));
        }
        if rec.metrics.insert(object, metric).is_some() {
            return Err(Error::parse(
                source,
                *line,
                format!("{symbol}: duplicate row for {object}"),
            ));
        }
        rec.evidence.insert(object, row[4].clone());
    }
    for rec in &records {
        if let Some(missing) = ImpactObjectName::ALL
            .iter()
            .find(|n| !rec.metrics.contains_key(n))
        {
            return Err(Error::parse(
                source,
                first_line[&rec.symbol],
                format!("{}: no row for {missing}", rec.symbol),
            ));
        }
    }
    Ok(records)
}

pub fn write_assessments(records: &[AssessmentRecord]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in records {
        for (name, m) in &r.metrics {
            let evidence = r.evidence.get(name).map_or("", String::as_str);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&r.symbol),
                r.as_of,
                name,
                m,
                csv_field(evidence)
            );
        }
    }
    out
}

pub fn parse_reported_totals(text: &str, source: &str) -> Result<BTreeMap<String, f64>> {
    let csv = read_csv(text, source, &TOTALS_HEADER, 0)?;
    let mut out = BTreeMap::new();
    for (line, row) in &csv.rows {
        let v = parse_f64(source, *line, "reported_total", &row[1])?;
        if out.insert(row[0].clone(), v).is_some() {
            return Err(Error::parse(
                source,
                *line,
                format!("duplicate symbol {}", row[0]),
            ));
        }
    }
    Ok(out)
}

pub fn write_reported_totals(totals: &BTreeMap<String, f64>) -> String {
    let mut out = TOTALS_HEADER.join(",");
    out.push('\n');
    for (s, v) in totals {
        let _ = writeln!(out, "{},{v}", csv_field(s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(symbol: &str, metric: f64) -> String {
        ImpactObjectName::ALL
            .iter()
            .map(|n| format!("{symbol},2025-05-31,{n},{metric},note\n"))
            .collect()
    }

    #[test]
    fn parses_in_first_appearance_order() {
        let text = format!(
            "{}{}{}",
            HEADER.join(","),
            "\n",
            full("B", 0.5) + &full("A", 0.25)
        );
        let recs = parse_assessments(&text, "t").unwrap();
        assert_eq!(
            recs.iter().map(|r| r.symbol.as_str()).collect::<Vec<_>>(),
            ["B", "A"]
        );
        assert!(recs.iter().all(|r| r.metrics.len() == 8));
        assert_eq!(recs[1].metrics[&ImpactObjectName::RugPull], 0.25);
    }

    #[test]
    fn missing_object_is_an_error() {
        let mut rows = full("A", 0.5);
        rows = rows.lines().skip(1).map(|l| format!("{l}\n")).collect();
        let text = format!("{}\n{rows}", HEADER.join(","));
        assert!(parse_assessments(&text, "t")
            .unwrap_err()
            .to_string()
            .contains("no row for"));
    }

    #[test]
    fn bad_rows_are_rejected() {
        let h = HEADER.join(",");
        for row in [
            "A,2025-05-31,meteor_strike,0.5,x",
            "A,2025-05-31,rug_pull,1.5,x",
            "A,2025-05-31,rug_pull,,x",
            "A,31/05/2025,rug_pull,0.5,x",
        ] {
            assert!(
                parse_assessments(&format!("{h}\n{row}\n"), "t").is_err(),
                "{row}"
            );
        }
        let dup = format!("{h}\n{}A,2025-05-31,rug_pull,0.5,x\n", full("A", 0.1));
        match parse_assessments(&dup, "t").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let text = format!(
            "{}\n{}",
            HEADER.join(","),
            full("A", 0.1) + &full("\"B, Inc\"", 1.0 / 3.0)
        );
        let recs = parse_assessments(&text, "t").unwrap();
        assert_eq!(
            parse_assessments(&write_assessments(&recs), "t").unwrap(),
            recs
        );

        let totals: BTreeMap<String, f64> =
            [("A".to_string(), 12.7117), ("B".to_string(), 3.094)].into();
        assert_eq!(
            parse_reported_totals(&write_reported_totals(&totals), "t").unwrap(),
            totals
        );
    }
}
