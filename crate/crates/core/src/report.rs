//! Per-stablecoin risk report: upstream decomposition, downstream share
//! vector and archetype.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::downstream::{
    classify_archetype, concentration_index, token_shares, Archetype, HolderSnapshot,
    TokenShareVector,
};
use crate::error::Result;
use crate::io::config::ScoreConfig;
use crate::model::{default_impact_objects, ImpactCategory, ImpactObject};
use crate::upstream::{
    peripheral_share, score_upstream, AssessmentRecord, PeripheralShare, UpstreamScore,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DownstreamSummary {
    pub taken_at: NaiveDate,
    pub shares: TokenShareVector,
    pub archetype: Archetype,
    /// Herfindahl index over the snapshot; absent for an empty snapshot.
    pub concentration: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub symbol: String,
    pub as_of: NaiveDate,
    pub upstream: UpstreamScore,
    pub peripheral_share: PeripheralShare,
    /// Absent when no holder snapshot was supplied.
    pub downstream: Option<DownstreamSummary>,
    /// Externally published total, carried for comparison only.
    pub reported_total: Option<f64>,
}

impl ReportRow {
    /// Category with the largest subtotal; `None` on a tie for first or a
    /// zero total.
    pub fn leading_category(&self) -> Option<ImpactCategory> {
        let mut best: Option<(ImpactCategory, f64)> = None;
        let mut tied = false;
        for c in ImpactCategory::ALL {
            let v = self.upstream.category(c);
            match best {
                Some((_, b)) if v == b => tied = true,
                Some((_, b)) if v < b => {}
                _ => {
                    best = Some((c, v));
                    tied = false;
                }
            }
        }
        best.filter(|&(_, v)| !tied && v > 0.0).map(|(c, _)| c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub dataset: String,
    pub config: ScoreConfig,
    pub rows: Vec<ReportRow>,
    /// Free-text footer lines, including warnings raised while building.
    pub notes: Vec<String>,
}

impl RiskReport {
    pub fn row(&self, symbol: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.symbol == symbol)
    }

    /// Symbol with the lowest upstream total (first in row order on ties).
    pub fn least_risky(&self) -> Option<&str> {
        self.rows
            .iter()
            .min_by(|a, b| a.upstream.total.total_cmp(&b.upstream.total))
            .map(|r| r.symbol.as_str())
    }
}

fn summarize_snapshot(snapshot: &HolderSnapshot, threshold: f64) -> Result<DownstreamSummary> {
    let shares = token_shares(snapshot)?;
    let archetype = classify_archetype(&shares, threshold);
    let concentration = if snapshot.holders.is_empty() {
        None
    } else {
        Some(concentration_index(snapshot)?)
    };
    Ok(DownstreamSummary {
        taken_at: snapshot.taken_at,
        shares,
        archetype,
        concentration,
    })
}

/// Scores every assessment record (rows follow record order). A record
/// without a snapshot gets no downstream block and a warning note; snapshots
/// without a record are ignored with a note.
pub fn build_report(
    dataset: &str,
    records: &[AssessmentRecord],
    snapshots: &BTreeMap<String, HolderSnapshot>,
    config: &ScoreConfig,
    reported_totals: &BTreeMap<String, f64>,
) -> Result<RiskReport> {
    build_report_with_objects(
        dataset,
        records,
        &default_impact_objects(),
        snapshots,
        config,
        reported_totals,
    )
}

pub fn build_report_with_objects(
    dataset: &str,
    records: &[AssessmentRecord],
    objects: &[ImpactObject],
    snapshots: &BTreeMap<String, HolderSnapshot>,
    config: &ScoreConfig,
    reported_totals: &BTreeMap<String, f64>,
) -> Result<RiskReport> {
    config.validate()?;
    let rows = records
        .par_iter()
        .map(|rec| {
            let upstream = score_upstream(rec, objects, &config.weights)?;
            let downstream = snapshots
                .get(&rec.symbol)
                .map(|s| summarize_snapshot(s, config.archetype_threshold))
                .transpose()?;
            Ok(ReportRow {
                symbol: rec.symbol.clone(),
                as_of: rec.as_of,
                peripheral_share: peripheral_share(&upstream),
                upstream,
                downstream,
                reported_total: reported_totals.get(&rec.symbol).copied(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut notes = Vec::new();
    for r in &rows {
        if r.downstream.is_none() {
            log::warn!("{}: no holder snapshot, downstream omitted", r.symbol);
            notes.push(format!(
                "{}: no holder snapshot, downstream omitted.",
                r.symbol
            ));
        }
    }
    for sym in snapshots.keys() {
        if !records.iter().any(|r| &r.symbol == sym) {
            log::warn!("{sym}: snapshot has no assessment record, ignored");
            notes.push(format!(
                "{sym}: snapshot has no assessment record, ignored."
            ));
        }
    }
    Ok(RiskReport {
        dataset: dataset.to_string(),
        config: config.clone(),
        rows,
        notes,
    })
}
