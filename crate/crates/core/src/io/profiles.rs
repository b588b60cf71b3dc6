//! Stablecoin reference list.
//!
//! Columns: `no,project,symbol,market_cap_usd,peg_currency,
//! collateral_classes,mechanisms,yield_rate,yield_sources`. Set-valued
//! columns are `;`-separated snake_case names. `yield_rate` is a fraction,
//! `0` for none, or `undisclosed`; `yield_sources` may be empty (no yield) or
//! `undisclosed`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::de::value::{Error as ValueError, StrDeserializer};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{csv_field, parse_f64, read_csv};
use crate::model::StablecoinProfile;

const HEADER: [&str; 9] = [
    "no",
    "project",
    "symbol",
    "market_cap_usd",
    "peg_currency",
    "collateral_classes",
    "mechanisms",
    "yield_rate",
    "yield_sources",
];

const UNDISCLOSED: &str = "undisclosed";

/// Parses a unit enum variant from its serde name.
pub(crate) fn from_name<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    T::deserialize(StrDeserializer::<ValueError>::new(s)).map_err(|e| e.to_string())
}

/// Serde name of a unit enum variant.
pub(crate) fn name_of<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => panic!("not a unit variant: {other:?}"),
    }
}

fn parse_set<T: DeserializeOwned + Ord>(
    source: &str,
    line: usize,
    field: &str,
    raw: &str,
) -> Result<BTreeSet<T>> {
    let mut out = BTreeSet::new();
    for part in raw.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let v = from_name(part).map_err(|e| Error::parse(source, line, format!("{field}: {e}")))?;
        if !out.insert(v) {
            return Err(Error::parse(
                source,
                line,
                format!("{field}: '{part}' repeated"),
            ));
        }
    }
    Ok(out)
}

fn join_set<T: Serialize>(set: &BTreeSet<T>) -> String {
    set.iter().map(name_of).collect::<Vec<_>>().join(";")
}

pub fn parse_profiles(text: &str, source: &str) -> Result<Vec<StablecoinProfile>> {
    let csv = read_csv(text, source, &HEADER, 0)?;
    let mut out: Vec<StablecoinProfile> = Vec::with_capacity(csv.rows.len());
    // Symbols alone are not unique across issuers.
    let mut keys = BTreeSet::new();
    for (line, row) in &csv.rows {
        let line = *line;
        row[0]
            .parse::<u32>()
            .map_err(|_| Error::parse(source, line, format!("no: '{}' is not a count", row[0])))?;
        let yield_rate = if row[7] == UNDISCLOSED {
            None
        } else {
            Some(parse_f64(source, line, "yield_rate", &row[7])?)
        };
        let (yield_sources, yield_sources_disclosed) = if row[8] == UNDISCLOSED {
            (BTreeSet::new(), false)
        } else {
            (parse_set(source, line, "yield_sources", &row[8])?, true)
        };
        let profile = StablecoinProfile {
            symbol: row[2].clone(),
            project: row[1].clone(),
            peg_currency: row[4].clone(),
            collateral_classes: parse_set(source, line, "collateral_classes", &row[5])?,
            mechanisms: parse_set(source, line, "mechanisms", &row[6])?,
            yield_rate,
            yield_sources,
            yield_sources_disclosed,
            market_cap: parse_f64(source, line, "market_cap_usd", &row[3])?,
        };
        profile
            .validate()
            .map_err(|e| Error::parse(source, line, e.to_string()))?;
        if !keys.insert((profile.project.clone(), profile.symbol.clone())) {
            return Err(Error::parse(
                source,
                line,
                format!("duplicate entry {} ({})", profile.symbol, profile.project),
            ));
        }
        out.push(profile);
    }
    Ok(out)
}

pub fn write_profiles(profiles: &[StablecoinProfile]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for (i, p) in profiles.iter().enumerate() {
        let rate = p
            .yield_rate
            .map_or(UNDISCLOSED.to_string(), |r| r.to_string());
        let sources = if p.yield_sources_disclosed {
            join_set(&p.yield_sources)
        } else {
            UNDISCLOSED.to_string()
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            i + 1,
            csv_field(&p.project),
            csv_field(&p.symbol),
            p.market_cap,
            csv_field(&p.peg_currency),
            join_set(&p.collateral_classes),
            join_set(&p.mechanisms),
            rate,
            sources
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CollateralClass, Mechanism, YieldSource};

    fn file(rows: &[&str]) -> String {
        format!("{}\n{}\n", HEADER.join(","), rows.join("\n"))
    }

    #[test]
    fn parses_yield_variants() {
        let p = parse_profiles(
            &file(&[
                "1,Tether,USDT,152797000000,USD,fiat,implicit,0,",
                "2,Sky,USDS,7007000000,USD,crypto,liquidation;emergency,0.065,native_protocol_revenue;external_defi",
                "3,Hashnote,USYC,390000000,USD,fiat,implicit,undisclosed,cash_equivalents",
                "4,X,XUSD,1000000,USD,rwa;crypto,hedging,0.05,undisclosed",
            ]),
            "t",
        )
        .unwrap();
        assert_eq!(p[0].yield_rate, Some(0.0));
        assert!(p[0].yield_sources.is_empty() && p[0].yield_sources_disclosed);
        assert!(p[1].mechanisms.contains(&Mechanism::Emergency));
        assert!(p[1].yield_sources.contains(&YieldSource::ExternalDefi));
        assert_eq!(p[2].yield_rate, None);
        assert!(!p[3].yield_sources_disclosed);
        assert_eq!(p[3].collateral_classes.len(), 2);
        assert!(p[3].collateral_classes.contains(&CollateralClass::Rwa));
    }

    #[test]
    fn rejects_unknown_names_and_duplicates() {
        assert!(parse_profiles(&file(&["1,A,A,1,USD,gold,implicit,0,"]), "t").is_err());
        assert!(parse_profiles(&file(&["1,A,A,1,USD,fiat,magic,0,"]), "t").is_err());
        assert!(parse_profiles(&file(&["1,A,A,1,USD,fiat,implicit,0.1,"]), "t").is_err());
        assert!(parse_profiles(
            &file(&[
                "1,A,A,1,USD,fiat,implicit,0,",
                "2,A,A,1,USD,fiat,implicit,0,"
            ]),
            "t"
        )
        .is_err());
        // Same symbol from different issuers is allowed.
        assert!(parse_profiles(
            &file(&[
                "1,A,X,1,USD,fiat,implicit,0,",
                "2,B,X,1,USD,fiat,implicit,0,"
            ]),
            "t"
        )
        .is_ok());
    }

    #[test]
    fn round_trip() {
        let text = file(&[
            "1,Tether,USDT,152797000000,USD,fiat,implicit,0,",
            "2,\"Sky, Inc\",USDS,7007000000,USD,crypto,liquidation;emergency,0.065,native_protocol_revenue",
            "3,Hashnote,USYC,390000000,USD,fiat,implicit,undisclosed,undisclosed",
        ]);
        let p = parse_profiles(&text, "t").unwrap();
        assert_eq!(parse_profiles(&write_profiles(&p), "t").unwrap(), p);
    }
}
