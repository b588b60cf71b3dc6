//! Upstream risk: per-object metrics weighted by impact degree and summed
//! into category subtotals and a total.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{weight_of, ImpactCategory, ImpactObject, ImpactObjectName, WeightScheme};

/// Metric inputs for one stablecoin at one date. Every metric lies in
/// [0, 1]: 1 is maximal exposure, 0 fully mitigated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentRecord {
    pub symbol: String,
    pub as_of: NaiveDate,
    pub metrics: BTreeMap<ImpactObjectName, f64>,
    pub evidence: BTreeMap<ImpactObjectName, String>,
}

impl AssessmentRecord {
    pub fn validate(&self) -> Result<()> {
        for name in ImpactObjectName::ALL {
            let m = self.metrics.get(&name).ok_or_else(|| {
                Error::Input(format!("{}: missing metric for {name}", self.symbol))
            })?;
            if !(0.0..=1.0).contains(m) {
                return Err(Error::Input(format!(
                    "{}: metric for {name} must lie in [0,1], got {m}",
                    self.symbol
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpstreamScore {
    pub symbol: String,
    pub per_object: BTreeMap<ImpactObjectName, f64>,
    pub per_category: BTreeMap<ImpactCategory, f64>,
    pub total: f64,
}

impl UpstreamScore {
    pub fn category(&self, c: ImpactCategory) -> f64 {
        self.per_category.get(&c).copied().unwrap_or(0.0)
    }
}

/// Weighted upstream sum. Each contribution is `weight_of(degree) × metric`;
/// category subtotals sum their members and the total sums the subtotals.
pub fn score_upstream(
    record: &AssessmentRecord,
    objects: &[ImpactObject],
    scheme: &WeightScheme,
) -> Result<UpstreamScore> {
    let mut per_object = BTreeMap::new();
    let mut per_category: BTreeMap<ImpactCategory, f64> =
        ImpactCategory::ALL.iter().map(|&c| (c, 0.0)).collect();
    for obj in objects {
        let m = *record.metrics.get(&obj.name).ok_or_else(|| {
            Error::Input(format!(
                "{}: missing metric for {}",
                record.symbol, obj.name
            ))
        })?;
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::Input(format!(
                "{}: metric for {} must lie in [0,1], got {m}",
                record.symbol, obj.name
            )));
        }
        let contribution = weight_of(&obj.degree, scheme)? * m;
        per_object.insert(obj.name, contribution);
        *per_category.entry(obj.category).or_default() += contribution;
    }
    let total = per_category.values().sum();
    Ok(UpstreamScore {
        symbol: record.symbol.clone(),
        per_object,
        per_category,
        total,
    })
}

/// Riskiest first; equal totals fall back to symbol order.
pub fn rank_by_total(scores: &[UpstreamScore]) -> Vec<&UpstreamScore> {
    let mut ranked: Vec<&UpstreamScore> = scores.iter().collect();
    ranked.sort_by(|a, b| match b.total.total_cmp(&a.total) {
        Ordering::Equal => a.symbol.cmp(&b.symbol),
        ord => ord,
    });
    ranked
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeripheralShare {
    Share(f64),
    /// Total upstream risk is zero, so no share is defined.
    NoRisk,
}

impl PeripheralShare {
    pub fn value(&self) -> Option<f64> {
        match self {
            PeripheralShare::Share(s) => Some(*s),
            PeripheralShare::NoRisk => None,
        }
    }
}

/// Fraction of the total carried by the peripheral-factor category.
pub fn peripheral_share(score: &UpstreamScore) -> PeripheralShare {
    let total: f64 = score.per_category.values().sum();
    if total <= 0.0 {
        PeripheralShare::NoRisk
    } else {
        PeripheralShare::Share(score.category(ImpactCategory::PeripheralFactor) / total)
    }
}

/// Audit or attestation cadence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cadence {
    None,
    OneOff,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierScores {
    pub none: f64,
    pub one_off: f64,
    pub regular: f64,
}

impl Default for TierScores {
    fn default() -> Self {
        Self {
            none: 1.0,
            one_off: 0.5,
            regular: 0.1,
        }
    }
}

impl TierScores {
    pub fn score(&self, c: Cadence) -> f64 {
        match c {
            Cadence::None => self.none,
            Cadence::OneOff => self.one_off,
            Cadence::Regular => self.regular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RubricConfig {
    #[serde(default)]
    pub audit: TierScores,
    #[serde(default)]
    pub attestation: TierScores,
}

/// Raw evidence from which object metrics are derived.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RubricInputs {
    pub audit: Option<Cadence>,
    pub attestation: Option<Cadence>,
    /// Top-holder concentration as a fraction in [0, 1].
    pub concentration: Option<f64>,
    /// Price standard deviation of the stablecoin, already normalized.
    pub normalized_psd: Option<f64>,
}

pub fn metric_from_rubric(
    object: ImpactObjectName,
    inputs: &RubricInputs,
    config: &RubricConfig,
) -> Result<f64> {
    let missing = |field: &str| Error::Input(format!("rubric for {object} requires '{field}'"));
    let audit = || {
        inputs
            .audit
            .map(|c| config.audit.score(c))
            .ok_or_else(|| missing("audit"))
    };
    let attestation = || {
        inputs
            .attestation
            .map(|c| config.attestation.score(c))
            .ok_or_else(|| missing("attestation"))
    };
    use ImpactObjectName::*;
    let m = match object {
        MarketVolatility => {
            let psd = inputs
                .normalized_psd
                .ok_or_else(|| missing("normalized_psd"))?;
            if psd.is_nan() {
                return Err(Error::Input(format!("normalized_psd for {object} is NaN")));
            }
            psd.clamp(0.0, 1.0)
        }
        PriceManipulation | CodeVulnerability | FlashLoan | AccessControl => audit()?,
        GovernanceAttack => {
            let c = inputs
                .concentration
                .ok_or_else(|| missing("concentration"))?;
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::Input(format!(
                    "concentration for {object} must lie in [0,1], got {c}"
                )));
            }
            (audit()? + c) / 2.0
        }
        RugPull => (audit()? + attestation()?) / 2.0,
        ImpactedFund => attestation()?,
    };
    Ok(m)
}
