//! Inputs of the collateral comparison: redemption costs, the jurisdiction
//! compliance table and the TOML file tying them to price series.
//!
//! ```toml
//! inflation = 0.0425
//! return_mode = "approx"          # or "exact"
//! redemption_costs = "redemption_costs.csv"
//! jurisdictions = "jurisdictions.csv"
//!
//! [[asset]]
//! id = "USD"
//! label = "USD (fiat currency)"
//! prices = "usd.csv"
//! nominal_return = 0.0
//! ```
//!
//! Paths are relative to the TOML file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::collateral::{
    build_comparison, ComparisonTable, InflationInputs, JurisdictionTable, PriceSeries,
    RedemptionCosts, ReturnMode,
};
use crate::error::{Error, Result};
use crate::io::prices::parse_price_csv;
use crate::io::{csv_field, parse_f64, read_csv, read_csv_checked, read_text, source_name};

const COST_HEADER: [&str; 3] = ["asset", "fee_usd", "delay_days"];

pub fn parse_redemption_costs(text: &str, source: &str) -> Result<Vec<RedemptionCosts>> {
    let csv = read_csv(text, source, &COST_HEADER, 0)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(csv.rows.len());
    for (line, row) in &csv.rows {
        let fee_usd = parse_f64(source, *line, "fee_usd", &row[1])?;
        let delay_days = parse_f64(source, *line, "delay_days", &row[2])?;
        if fee_usd < 0.0 || delay_days < 0.0 {
            return Err(Error::parse(
                source,
                *line,
                "fee and delay must be nonnegative",
            ));
        }
        if !seen.insert(row[0].clone()) {
            return Err(Error::parse(
                source,
                *line,
                format!("duplicate asset {}", row[0]),
            ));
        }
        out.push(RedemptionCosts {
            asset: row[0].clone(),
            fee_usd,
            delay_days,
        });
    }
    Ok(out)
}

pub fn write_redemption_costs(costs: &[RedemptionCosts]) -> String {
    let mut out = COST_HEADER.join(",");
    out.push('\n');
    for c in costs {
        let _ = writeln!(
            out,
            "{},{},{}",
            csv_field(&c.asset),
            c.fee_usd,
            c.delay_days
        );
    }
    out
}

/// `jurisdiction,weight,<asset>...` with 0/1 compliance flags.
pub fn parse_jurisdictions(text: &str, source: &str) -> Result<JurisdictionTable> {
    let csv = read_csv_checked(text, source, 0, "jurisdiction,weight,<asset>...", |h| {
        h.len() > 2 && h[0] == "jurisdiction" && h[1] == "weight"
    })?;
    let assets = &csv.header[2..];
    let mut unique = BTreeSet::new();
    for a in assets {
        if a.is_empty() || !unique.insert(a.as_str()) {
            return Err(Error::parse(
                source,
                1,
                format!("bad or repeated asset column '{a}'"),
            ));
        }
    }
    let mut jurisdictions = Vec::with_capacity(csv.rows.len());
    let mut compliance: BTreeMap<String, Vec<bool>> =
        assets.iter().map(|a| (a.clone(), Vec::new())).collect();
    let mut names = BTreeSet::new();
    for (line, row) in &csv.rows {
        if !names.insert(row[0].clone()) {
            return Err(Error::parse(
                source,
                *line,
                format!("duplicate jurisdiction {}", row[0]),
            ));
        }
        let w = parse_f64(source, *line, "weight", &row[1])?;
        if w < 0.0 {
            return Err(Error::parse(source, *line, format!("negative weight {w}")));
        }
        jurisdictions.push((row[0].clone(), w));
        for (asset, raw) in assets.iter().zip(&row[2..]) {
            let flag = match raw.as_str() {
                "1" => true,
                "0" => false,
                other => {
                    return Err(Error::parse(
                        source,
                        *line,
                        format!("{asset}: compliance flag must be 0 or 1, got '{other}'"),
                    ))
                }
            };
            compliance
                .get_mut(asset)
                .expect("column registered")
                .push(flag);
        }
    }
    Ok(JurisdictionTable {
        jurisdictions,
        compliance,
    })
}

/// Asset columns follow `order`; assets not listed there follow in name
/// order.
pub fn write_jurisdictions(table: &JurisdictionTable, order: &[&str]) -> String {
    let mut assets: Vec<&str> = order
        .iter()
        .copied()
        .filter(|a| table.compliance.contains_key(*a))
        .collect();
    for a in table.compliance.keys() {
        if !assets.contains(&a.as_str()) {
            assets.push(a);
        }
    }
    let mut out = String::from("jurisdiction,weight");
    for a in &assets {
        out.push(',');
        out.push_str(&csv_field(a));
    }
    out.push('\n');
    for (i, (name, w)) in table.jurisdictions.iter().enumerate() {
        let _ = write!(out, "{},{w}", csv_field(name));
        for a in &assets {
            out.push_str(if table.compliance[*a][i] { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetEntry {
    pub id: String,
    pub label: String,
    pub prices: PathBuf,
    pub nominal_return: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    pub inflation: f64,
    pub return_mode: ReturnMode,
    pub redemption_costs: PathBuf,
    pub jurisdictions: PathBuf,
    pub asset: Vec<AssetEntry>,
}

/// Everything needed for one comparison table, loaded and validated.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsInputs {
    pub series: Vec<PriceSeries>,
    pub labels: BTreeMap<String, String>,
    pub costs: Vec<RedemptionCosts>,
    pub inflation: BTreeMap<String, InflationInputs>,
    pub jurisdictions: JurisdictionTable,
    pub return_mode: ReturnMode,
}

impl MetricsInputs {
    pub fn comparison(&self) -> Result<ComparisonTable> {
        let mut table = build_comparison(
            &self.series,
            &self.costs,
            &self.inflation,
            &self.jurisdictions,
            self.return_mode,
        )?;
        for row in &mut table.rows {
            if let Some(l) = self.labels.get(&row.asset) {
                row.label = l.clone();
            }
        }
        Ok(table)
    }
}

pub fn parse_metrics_config(text: &str, source: &str) -> Result<MetricsConfig> {
    let cfg: MetricsConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("{source}: {e}")))?;
    if cfg.asset.is_empty() {
        return Err(Error::Config(format!("{source}: no [[asset]] entries")));
    }
    let mut ids = BTreeSet::new();
    for a in &cfg.asset {
        if !ids.insert(a.id.as_str()) {
            return Err(Error::Config(format!(
                "{source}: asset '{}' listed twice",
                a.id
            )));
        }
    }
    Ok(cfg)
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn load_metrics_inputs(config_path: &Path) -> Result<MetricsInputs> {
    let cfg = parse_metrics_config(&read_text(config_path)?, &source_name(config_path))?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let mut series = Vec::with_capacity(cfg.asset.len());
    let mut labels = BTreeMap::new();
    let mut inflation = BTreeMap::new();
    for a in &cfg.asset {
        let path = resolve(base, &a.prices);
        series.push(parse_price_csv(
            &read_text(&path)?,
            &a.id,
            &source_name(&path),
        )?);
        labels.insert(a.id.clone(), a.label.clone());
        inflation.insert(
            a.id.clone(),
            InflationInputs {
                nominal_return: a.nominal_return,
                inflation: cfg.inflation,
            },
        );
    }
    let costs_path = resolve(base, &cfg.redemption_costs);
    let costs = parse_redemption_costs(&read_text(&costs_path)?, &source_name(&costs_path))?;
    let j_path = resolve(base, &cfg.jurisdictions);
    let jurisdictions = parse_jurisdictions(&read_text(&j_path)?, &source_name(&j_path))?;
    Ok(MetricsInputs {
        series,
        labels,
        costs,
        inflation,
        jurisdictions,
        return_mode: cfg.return_mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn costs_round_trip_and_reject() {
        let text = "asset,fee_usd,delay_days\nUSD,25,2.994\nBTC,5,0\n";
        let c = parse_redemption_costs(text, "t").unwrap();
        assert_eq!(write_redemption_costs(&c), text);
        assert!(parse_redemption_costs("asset,fee_usd,delay_days\nA,-1,0\n", "t").is_err());
        assert!(parse_redemption_costs("asset,fee_usd,delay_days\nA,1,0\nA,2,0\n", "t").is_err());
    }

    #[test]
    fn jurisdictions_round_trip_and_reject() {
        let text = "jurisdiction,weight,USD,BTC\nJ1,1,1,0\nJ2,0.5,1,1\n";
        let t = parse_jurisdictions(text, "t").unwrap();
        assert_eq!(t.compliance["BTC"], vec![false, true]);
        assert_eq!(write_jurisdictions(&t, &["USD", "BTC"]), text);
        assert_eq!(
            parse_jurisdictions(&write_jurisdictions(&t, &[]), "t").unwrap(),
            t
        );
        assert!(parse_jurisdictions("jurisdiction,weight,USD\nJ1,1,yes\n", "t").is_err());
        assert!(parse_jurisdictions("jurisdiction,weight\nJ1,1\n", "t").is_err());
        assert!(parse_jurisdictions("jurisdiction,weight,A\nJ1,1,1\nJ1,1,0\n", "t").is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let ok = "inflation = 0.01\nreturn_mode = \"exact\"\nredemption_costs = \"c.csv\"\njurisdictions = \"j.csv\"\n[[asset]]\nid = \"A\"\nlabel = \"A\"\nprices = \"a.csv\"\nnominal_return = 0.0\n";
        assert!(parse_metrics_config(ok, "t").is_ok());
        assert!(parse_metrics_config(&format!("colour = 1\n{ok}"), "t").is_err());
        assert!(parse_metrics_config(&ok.replace("exact", "fuzzy"), "t").is_err());
    }
}
