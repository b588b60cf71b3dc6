//! Downstream composition: token-share vectors by holder category, risk
//! archetypes and holder concentration.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::HolderCategory;

/// Coverage below this fraction of supply is reported as a warning.
pub const COVERAGE_WARNING: f64 = 0.75;

pub const DEFAULT_ARCHETYPE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Holder {
    pub address: String,
    pub balance: f64,
    pub category: HolderCategory,
}

/// Labeled top-N holder balances of one stablecoin at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderSnapshot {
    pub symbol: String,
    pub taken_at: NaiveDate,
    pub total_supply: f64,
    pub holders: Vec<Holder>,
    pub top_n: usize,
    /// Where the labels came from; recorded, never verified.
    pub label_source: Option<String>,
}

impl HolderSnapshot {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Input(format!("{}: {m}", self.symbol)));
        if !(self.total_supply.is_finite() && self.total_supply >= 0.0) {
            return fail(format!("invalid total supply {}", self.total_supply));
        }
        if self.holders.len() > self.top_n {
            return fail(format!(
                "{} holders exceed top_n = {}",
                self.holders.len(),
                self.top_n
            ));
        }
        let mut seen = BTreeSet::new();
        let mut sum = 0.0;
        for h in &self.holders {
            if !(h.balance.is_finite() && h.balance > 0.0) {
                return fail(format!(
                    "nonpositive balance {} for {}",
                    h.balance, h.address
                ));
            }
            if !seen.insert(h.address.as_str()) {
                return fail(format!("duplicate address {}", h.address));
            }
            sum += h.balance;
        }
        if sum > self.total_supply * (1.0 + 1e-12) {
            return fail(format!(
                "holder balances sum to {sum}, above total supply {}",
                self.total_supply
            ));
        }
        Ok(())
    }
}

/// Fraction of total supply held by each category. `coverage` is the sum of
/// the six fractions; the rest of the supply is outside the snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenShareVector {
    pub shares: BTreeMap<HolderCategory, f64>,
    pub coverage: f64,
}

impl TokenShareVector {
    pub fn zero() -> Self {
        Self {
            shares: HolderCategory::ALL.iter().map(|&c| (c, 0.0)).collect(),
            coverage: 0.0,
        }
    }

    pub fn share(&self, c: HolderCategory) -> f64 {
        self.shares.get(&c).copied().unwrap_or(0.0)
    }

    pub fn percent(&self, c: HolderCategory) -> f64 {
        100.0 * self.share(c)
    }

    pub fn uncovered(&self) -> f64 {
        (1.0 - self.coverage).max(0.0)
    }
}

pub fn token_shares(snapshot: &HolderSnapshot) -> Result<TokenShareVector> {
    snapshot.validate()?;
    if snapshot.total_supply <= 0.0 {
        return Err(Error::Input(format!(
            "{}: total supply must be positive",
            snapshot.symbol
        )));
    }
    let mut mass: BTreeMap<HolderCategory, f64> =
        HolderCategory::ALL.iter().map(|&c| (c, 0.0)).collect();
    for h in &snapshot.holders {
        *mass.entry(h.category).or_default() += h.balance;
    }
    let shares: BTreeMap<_, _> = mass
        .into_iter()
        .map(|(c, m)| (c, m / snapshot.total_supply))
        .collect();
    let coverage = shares.values().sum();
    if coverage < COVERAGE_WARNING {
        log::warn!(
            "{}: snapshot covers only {:.2}% of supply",
            snapshot.symbol,
            100.0 * coverage
        );
    }
    Ok(TokenShareVector { shares, coverage })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchetypeKind {
    DefiCentric,
    ExchangeCentric,
    WhaleDominated,
    AssetMgmtCentric,
    InfraCentric,
    Mixed,
}

impl ArchetypeKind {
    pub fn for_category(c: HolderCategory) -> Option<ArchetypeKind> {
        match c {
            HolderCategory::Exchange => Some(ArchetypeKind::ExchangeCentric),
            HolderCategory::AssetManagement => Some(ArchetypeKind::AssetMgmtCentric),
            HolderCategory::DefiProtocol => Some(ArchetypeKind::DefiCentric),
            HolderCategory::BlockchainInfrastructure => Some(ArchetypeKind::InfraCentric),
            HolderCategory::WhaleRetail => Some(ArchetypeKind::WhaleDominated),
            HolderCategory::Unlabeled => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Archetype {
    pub kind: ArchetypeKind,
    /// Largest labeled-category share, whatever the classification.
    pub dominant_share: f64,
    pub dominant_category: Option<HolderCategory>,
}

/// The archetype of the largest labeled category when its share reaches
/// `threshold`; `Mixed` otherwise, or when the largest share is tied.
pub fn classify_archetype(v: &TokenShareVector, threshold: f64) -> Archetype {
    let mut best: Option<(HolderCategory, f64)> = None;
    let mut tied = false;
    for c in HolderCategory::LABELED {
        let s = v.share(c);
        match best {
            Some((_, b)) if s == b => tied = true,
            Some((_, b)) if s < b => {}
            _ => {
                best = Some((c, s));
                tied = false;
            }
        }
    }
    let (cat, share) = best.expect("five labeled categories");
    let kind = if !tied && share >= threshold {
        ArchetypeKind::for_category(cat).expect("labeled category")
    } else {
        ArchetypeKind::Mixed
    };
    Archetype {
        kind,
        dominant_share: share,
        dominant_category: (!tied).then_some(cat),
    }
}

/// Herfindahl–Hirschman index of balances within the covered supply.
pub fn concentration_index(snapshot: &HolderSnapshot) -> Result<f64> {
    if snapshot.holders.is_empty() {
        return Err(Error::Input(format!(
            "{}: concentration needs at least one holder",
            snapshot.symbol
        )));
    }
    let covered: f64 = snapshot.holders.iter().map(|h| h.balance).sum();
    if !(covered > 0.0) {
        return Err(Error::Input(format!(
            "{}: no positive balances",
            snapshot.symbol
        )));
    }
    Ok(snapshot
        .holders
        .iter()
        .map(|h| (h.balance / covered).powi(2))
        .sum())
}
