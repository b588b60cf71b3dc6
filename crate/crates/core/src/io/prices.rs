//! Daily closing-price CSV: header `date,close`, ISO dates, strictly
//! increasing.

use std::fmt::Write as _;

use crate::collateral::{PricePoint, PriceSeries};
use crate::error::{Error, Result};
use crate::io::{parse_date, parse_f64, read_csv};

const HEADER: [&str; 2] = ["date", "close"];

pub fn parse_price_csv(text: &str, asset: &str, source: &str) -> Result<PriceSeries> {
    let csv = read_csv(text, source, &HEADER, 0)?;
    let mut observations: Vec<PricePoint> = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        let date = parse_date(source, *line, "date", &row[0])?;
        let close = parse_f64(source, *line, "close", &row[1])?;
        if close <= 0.0 {
            return Err(Error::parse(
                source,
                *line,
                format!("nonpositive close {close}"),
            ));
        }
        if let Some(prev) = observations.last() {
            if date == prev.date {
                return Err(Error::parse(
                    source,
                    *line,
                    format!("duplicate date {date}"),
                ));
            }
            if date < prev.date {
                return Err(Error::parse(
                    source,
                    *line,
                    format!("date {date} is earlier than preceding date {}", prev.date),
                ));
            }
        }
        observations.push(PricePoint { date, close });
    }
    let series = PriceSeries {
        asset: asset.to_string(),
        observations,
        source_note: source.to_string(),
    };
    series.validate()?;
    Ok(series)
}

pub fn write_price_csv(series: &PriceSeries) -> String {
    let mut out = String::from("date,close\n");
    for p in &series.observations {
        let _ = writeln!(out, "{},{}", p.date, p.close);
    }
    out
}
