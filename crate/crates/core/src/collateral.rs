//! Collateral-asset comparison metrics: price standard deviation,
//! redemption efficiency index, inflation-adjusted real return and the
//! jurisdictional compliance score, plus the table that combines them.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CollateralClass, StablecoinProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricePoint {
    pub date: NaiveDate,
    pub close: f64,
}

/// Daily closing prices of one asset, strictly increasing in date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    pub asset: String,
    pub observations: Vec<PricePoint>,
    pub source_note: String,
}

impl PriceSeries {
    pub fn validate(&self) -> Result<()> {
        for pair in self.observations.windows(2) {
            if pair[1].date <= pair[0].date {
                return Err(Error::Input(format!(
                    "{}: dates not strictly increasing ({} then {})",
                    self.asset, pair[0].date, pair[1].date
                )));
            }
        }
        if let Some(p) = self
            .observations
            .iter()
            .find(|p| !(p.close.is_finite() && p.close > 0.0))
        {
            return Err(Error::Input(format!(
                "{}: nonpositive price {} on {}",
                self.asset, p.close, p.date
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedemptionCosts {
    pub asset: String,
    pub fee_usd: f64,
    pub delay_days: f64,
}

/// Jurisdiction weights and per-asset compliance indicators aligned with them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JurisdictionTable {
    pub jurisdictions: Vec<(String, f64)>,
    pub compliance: BTreeMap<String, Vec<bool>>,
}

impl JurisdictionTable {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in &self.jurisdictions {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::Input(format!(
                    "jurisdiction {name} has invalid weight {w}"
                )));
            }
        }
        for (asset, flags) in &self.compliance {
            if flags.len() != self.jurisdictions.len() {
                return Err(Error::Input(format!(
                    "compliance vector for {asset} has {} entries, expected {}",
                    flags.len(),
                    self.jurisdictions.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InflationInputs {
    pub nominal_return: f64,
    pub inflation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnMode {
    /// `(1+i)/(1+π) − 1`
    Exact,
    /// `i − π`
    #[default]
    Approx,
}

/// Population standard deviation of the closing prices (divides by T).
pub fn psd(series: &PriceSeries) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::Input(format!(
            "{}: at least 2 observations required, got {}",
            series.asset,
            series.len()
        )));
    }
    let n = series.len() as f64;
    let mean = series.observations.iter().map(|p| p.close).sum::<f64>() / n;
    let var = series
        .observations
        .iter()
        .map(|p| (p.close - mean).powi(2))
        .sum::<f64>()
        / n;
    Ok(var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostDimension {
    Fee,
    Delay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReiScores {
    pub by_asset: BTreeMap<String, f64>,
    /// Dimensions whose values were all equal and normalized to 0.
    pub degenerate: Vec<CostDimension>,
}

fn min_max(values: &[f64]) -> Option<Vec<f64>> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        Some(values.iter().map(|v| (v - lo) / (hi - lo)).collect())
    } else {
        None
    }
}

/// Redemption efficiency: min-max normalized fee plus min-max normalized
/// delay, computed across the given set. Lower is more efficient.
pub fn rei(costs: &[RedemptionCosts]) -> Result<ReiScores> {
    if costs.len() < 2 {
        return Err(Error::Input(
            "REI compares assets; at least 2 are required".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for c in costs {
        if !seen.insert(c.asset.as_str()) {
            return Err(Error::Input(format!("duplicate asset {}", c.asset)));
        }
        if !(c.fee_usd.is_finite() && c.fee_usd >= 0.0)
            || !(c.delay_days.is_finite() && c.delay_days >= 0.0)
        {
            return Err(Error::Input(format!(
                "{}: fee and delay must be finite and nonnegative",
                c.asset
            )));
        }
    }
    let mut degenerate = Vec::new();
    let mut normalize = |dim, vals: Vec<f64>| {
        min_max(&vals).unwrap_or_else(|| {
            log::warn!("REI {dim:?} dimension has no spread; normalizing to 0");
            degenerate.push(dim);
            vec![0.0; vals.len()]
        })
    };
    let fees = normalize(
        CostDimension::Fee,
        costs.iter().map(|c| c.fee_usd).collect(),
    );
    let delays = normalize(
        CostDimension::Delay,
        costs.iter().map(|c| c.delay_days).collect(),
    );
    let by_asset = costs
        .iter()
        .zip(fees.iter().zip(&delays))
        .map(|(c, (f, d))| (c.asset.clone(), f + d))
        .collect();
    Ok(ReiScores {
        by_asset,
        degenerate,
    })
}

/// Real return from the Fisher relation, as a fraction per year.
pub fn real_return(inputs: &InflationInputs, mode: ReturnMode) -> Result<f64> {
    let InflationInputs {
        nominal_return: i,
        inflation: pi,
    } = *inputs;
    if !i.is_finite() || !pi.is_finite() {
        return Err(Error::Input(
            "nominal return and inflation must be finite".into(),
        ));
    }
    match mode {
        ReturnMode::Approx => Ok(i - pi),
        ReturnMode::Exact => {
            if pi == -1.0 {
                return Err(Error::Input(
                    "inflation of -100% makes the exact real return undefined".into(),
                ));
            }
            Ok((1.0 + i) / (1.0 + pi) - 1.0)
        }
    }
}

/// Weighted count of jurisdictions where the asset is compliant.
pub fn j_score(table: &JurisdictionTable, asset: &str) -> Result<f64> {
    let flags = table.compliance.get(asset).ok_or_else(|| Error::Lookup {
        kind: "asset",
        key: asset.to_string(),
    })?;
    if flags.len() != table.jurisdictions.len() {
        table.validate()?;
    }
    Ok(table
        .jurisdictions
        .iter()
        .zip(flags)
        .filter(|(_, &c)| c)
        .map(|((_, w), _)| w)
        .sum())
}

/// Median nominal yield of the profiles backed by `class`. Coins without
/// yield count as 0; coins with an undisclosed rate are skipped.
pub fn median_yield(profiles: &[StablecoinProfile], class: CollateralClass) -> Option<f64> {
    let mut rates: Vec<f64> = profiles
        .iter()
        .filter(|p| p.collateral_classes.contains(&class))
        .filter_map(|p| p.yield_rate)
        .collect();
    if rates.is_empty() {
        return None;
    }
    rates.sort_by(f64::total_cmp);
    let mid = rates.len() / 2;
    Some(if rates.len() % 2 == 1 {
        rates[mid]
    } else {
        (rates[mid - 1] + rates[mid]) / 2.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BestMarks {
    pub psd: bool,
    pub rei: bool,
    pub real_return: bool,
    pub j_score: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub asset: String,
    pub label: String,
    pub psd: f64,
    pub rei: f64,
    /// Fraction per year; rendered in percentage points.
    pub real_return: f64,
    pub j_score: f64,
    pub best: BestMarks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub return_mode: ReturnMode,
    pub rows: Vec<ComparisonRow>,
}

fn same_set<'a>(
    what: &str,
    reference: &BTreeSet<&'a str>,
    other: impl Iterator<Item = &'a str>,
) -> Result<()> {
    let other: BTreeSet<&str> = other.collect();
    if &other == reference {
        return Ok(());
    }
    let missing: Vec<_> = reference.difference(&other).copied().collect();
    let extra: Vec<_> = other.difference(reference).copied().collect();
    Err(Error::Input(format!(
        "{what} asset set differs from price series: missing [{}], unexpected [{}]",
        missing.join(", "),
        extra.join(", ")
    )))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn mark_best(values: &[f64], lower_is_better: bool) -> Vec<bool> {
    let target = if lower_is_better {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    values.iter().map(|&v| close(v, target)).collect()
}

/// Real returns above zero all count as best (the asset beats inflation);
/// when none does, the highest is marked.
fn mark_inflation_resistant(values: &[f64]) -> Vec<bool> {
    if values.iter().any(|&v| v > 0.0) {
        values.iter().map(|&v| v > 0.0).collect()
    } else {
        mark_best(values, false)
    }
}

/// One row per price series (in input order) with all four metrics and the
/// per-column best values marked: lowest PSD and REI, highest J-Score, and
/// every positive real return. Ties are all marked.
pub fn build_comparison(
    series: &[PriceSeries],
    costs: &[RedemptionCosts],
    inflation: &BTreeMap<String, InflationInputs>,
    jurisdictions: &JurisdictionTable,
    mode: ReturnMode,
) -> Result<ComparisonTable> {
    let assets: BTreeSet<&str> = series.iter().map(|s| s.asset.as_str()).collect();
    if assets.len() != series.len() {
        return Err(Error::Input("duplicate asset among price series".into()));
    }
    same_set(
        "redemption cost",
        &assets,
        costs.iter().map(|c| c.asset.as_str()),
    )?;
    same_set("inflation", &assets, inflation.keys().map(String::as_str))?;
    same_set(
        "jurisdiction",
        &assets,
        jurisdictions.compliance.keys().map(String::as_str),
    )?;
    jurisdictions.validate()?;

    let rei_scores = rei(costs)?;
    let mut rows = Vec::with_capacity(series.len());
    for s in series {
        s.validate()?;
        rows.push(ComparisonRow {
            asset: s.asset.clone(),
            label: s.asset.clone(),
            psd: psd(s)?,
            rei: rei_scores.by_asset[&s.asset],
            real_return: real_return(&inflation[&s.asset], mode)?,
            j_score: j_score(jurisdictions, &s.asset)?,
            best: BestMarks::default(),
        });
    }
    let col = |f: fn(&ComparisonRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let psd_best = mark_best(&col(|r| r.psd), true);
    let rei_best = mark_best(&col(|r| r.rei), true);
    let ret_best = mark_inflation_resistant(&col(|r| r.real_return));
    let j_best = mark_best(&col(|r| r.j_score), false);
    for (i, row) in rows.iter_mut().enumerate() {
        row.best = BestMarks {
            psd: psd_best[i],
            rei: rei_best[i],
            real_return: ret_best[i],
            j_score: j_best[i],
        };
    }
    Ok(ComparisonTable {
        return_mode: mode,
        rows,
    })
}
