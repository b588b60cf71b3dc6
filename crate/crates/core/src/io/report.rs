//! Report writers: the risk report and the collateral comparison table, each
//! as JSON, CSV and Markdown. Output is byte-stable for equal inputs.
//! JSON carries full precision and parses back; CSV and Markdown use fixed
//! precision with round-half-even.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::collateral::ComparisonTable;
use crate::downstream::ArchetypeKind;
use crate::error::{Error, Result};
use crate::io::profiles::name_of;
use crate::io::{csv_field, fixed};
use crate::model::{HolderCategory, ImpactCategory};
use crate::report::RiskReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Md,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Md];

    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Md => "md",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "md" => Ok(OutputFormat::Md),
            other => Err(Error::Input(format!(
                "unknown output format '{other}' (valid: json, csv, md)"
            ))),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes to JSON");
    s.push('\n');
    s
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(source, e.line(), e.to_string()))
}

const PCT: usize = 4;

pub fn archetype_label(kind: ArchetypeKind) -> &'static str {
    match kind {
        ArchetypeKind::DefiCentric => "DeFi-centric",
        ArchetypeKind::ExchangeCentric => "Exchange-centric",
        ArchetypeKind::WhaleDominated => "Whale-dominated",
        ArchetypeKind::AssetMgmtCentric => "Asset-management-centric",
        ArchetypeKind::InfraCentric => "Infrastructure-centric",
        ArchetypeKind::Mixed => "Mixed",
    }
}

pub fn write_report(report: &RiskReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => write_report_csv(report),
        OutputFormat::Md => write_report_md(report),
    }
}

pub fn parse_report_json(text: &str, source: &str) -> Result<RiskReport> {
    from_json(text, source)
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| fixed(x, PCT))
}

pub fn write_report_csv(report: &RiskReport) -> String {
    let mut out = String::from("symbol,as_of");
    for c in ImpactCategory::ALL {
        let _ = write!(out, ",{}", name_of(&c));
    }
    out.push_str(",total,peripheral_share");
    for c in HolderCategory::ALL {
        let _ = write!(out, ",{}_pct", name_of(&c));
    }
    out.push_str(",coverage_pct,archetype,dominant_share_pct,concentration,reported_total\n");

    for r in &report.rows {
        let _ = write!(out, "{},{}", csv_field(&r.symbol), r.as_of);
        for c in ImpactCategory::ALL {
            let _ = write!(out, ",{}", fixed(r.upstream.category(c), PCT));
        }
        let _ = write!(
            out,
            ",{},{}",
            fixed(r.upstream.total, PCT),
            opt(r.peripheral_share.value())
        );
        match &r.downstream {
            Some(dn) => {
                for c in HolderCategory::ALL {
                    let _ = write!(out, ",{}", fixed(dn.shares.percent(c), PCT));
                }
                let _ = write!(
                    out,
                    ",{},{},{},{}",
                    fixed(100.0 * dn.shares.coverage, PCT),
                    name_of(&dn.archetype.kind),
                    fixed(100.0 * dn.archetype.dominant_share, PCT),
                    opt(dn.concentration)
                );
            }
            None => out.push_str(&",".repeat(HolderCategory::ALL.len() + 4)),
        }
        let _ = writeln!(out, ",{}", opt(r.reported_total));
    }
    out
}

fn bold(s: String, on: bool) -> String {
    if on {
        format!("**{s}**")
    } else {
        s
    }
}

/// Markdown table with the upstream categories, total and the five labeled
/// downstream shares. The archetype-dominant share and the lowest total are
/// bold. Notes and reported totals form the footer.
pub fn write_report_md(report: &RiskReport) -> String {
    let mut out = String::from("| Stablecoin");
    for c in ImpactCategory::ALL {
        let _ = write!(out, " | {}", c.label());
    }
    out.push_str(" | Total");
    for c in HolderCategory::LABELED {
        let _ = write!(out, " | {}", c.label());
    }
    out.push_str(" |\n|---");
    out.push_str(&"|---:".repeat(ImpactCategory::ALL.len() + 1 + HolderCategory::LABELED.len()));
    out.push_str("|\n");

    let min_total = report
        .rows
        .iter()
        .map(|r| r.upstream.total)
        .fold(f64::INFINITY, f64::min);
    for r in &report.rows {
        let _ = write!(out, "| {}", r.symbol);
        for c in ImpactCategory::ALL {
            let _ = write!(out, " | {}", fixed(r.upstream.category(c), PCT));
        }
        let _ = write!(
            out,
            " | {}",
            bold(fixed(r.upstream.total, PCT), r.upstream.total == min_total)
        );
        for c in HolderCategory::LABELED {
            let cell = match &r.downstream {
                Some(dn) => {
                    let dominant = dn.archetype.kind != ArchetypeKind::Mixed
                        && dn.archetype.dominant_category == Some(c);
                    bold(fixed(dn.shares.percent(c), PCT), dominant)
                }
                None => "n/a".to_string(),
            };
            let _ = write!(out, " | {cell}");
        }
        out.push_str(" |\n");
    }

    out.push_str("\nDownstream values are percentages of total supply. Bold: archetype-dominant share (threshold ");
    out.push_str(&fixed(100.0 * report.config.archetype_threshold, 2));
    out.push_str("%) and lowest upstream total.\n");
    let reported: Vec<String> = report
        .rows
        .iter()
        .filter_map(|r| {
            r.reported_total
                .map(|t| format!("{} {}", r.symbol, fixed(t, PCT)))
        })
        .collect();
    if !reported.is_empty() {
        let _ = writeln!(out, "\nReported totals: {}.", reported.join(", "));
    }
    for n in &report.notes {
        let _ = writeln!(out, "\n{n}");
    }
    out
}

pub fn write_comparison(table: &ComparisonTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(table),
        OutputFormat::Csv => write_comparison_csv(table),
        OutputFormat::Md => write_comparison_md(table),
    }
}

pub fn parse_comparison_json(text: &str, source: &str) -> Result<ComparisonTable> {
    from_json(text, source)
}

fn fmt_psd(v: f64) -> String {
    fixed(v, 2)
}

fn fmt_rei(v: f64) -> String {
    fixed(v, 4)
}

/// Real return in percentage points.
fn fmt_return(v: f64) -> String {
    fixed(100.0 * v, 2)
}

fn fmt_j(v: f64) -> String {
    if v.fract() == 0.0 {
        fixed(v, 0)
    } else {
        fixed(v, 2)
    }
}

pub fn write_comparison_csv(table: &ComparisonTable) -> String {
    let mut out = String::from(
        "asset,label,psd,rei,real_return_pct,j_score,best_psd,best_rei,best_real_return,best_j_score\n",
    );
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.asset),
            csv_field(&r.label),
            fmt_psd(r.psd),
            fmt_rei(r.rei),
            fmt_return(r.real_return),
            fmt_j(r.j_score),
            r.best.psd,
            r.best.rei,
            r.best.real_return,
            r.best.j_score
        );
    }
    out
}

pub fn write_comparison_md(table: &ComparisonTable) -> String {
    let mut out = String::from(
        "| | Volatility (PSD) | Redemption efficiency (REI) | Inflation resistance (r) | Compliance (J-Score) |\n|---|---:|---:|---:|---:|\n",
    );
    for r in &table.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            r.label,
            bold(fmt_psd(r.psd), r.best.psd),
            bold(fmt_rei(r.rei), r.best.rei),
            bold(fmt_return(r.real_return), r.best.real_return),
            bold(fmt_j(r.j_score), r.best.j_score)
        );
    }
    let mode = match table.return_mode {
        crate::collateral::ReturnMode::Approx => "i − π",
        crate::collateral::ReturnMode::Exact => "(1+i)/(1+π) − 1",
    };
    let _ = writeln!(
        out,
        "\nBold marks the better values. r is in percentage points, computed as {mode}."
    );
    out
}
