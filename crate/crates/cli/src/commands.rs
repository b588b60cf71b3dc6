//! Command runners. Each reads its inputs, calls into the core library and
//! writes one file per requested format.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use sclego_core::downstream::HolderSnapshot;
use sclego_core::io::assessments::{parse_assessments, parse_reported_totals};
use sclego_core::io::collateral_inputs::load_metrics_inputs;
use sclego_core::io::config::{parse_controllers, parse_scenario, parse_seeds};
use sclego_core::io::incidents::{
    cause_histogram, parse_incidents, write_histogram_csv, write_histogram_md,
};
use sclego_core::io::manifest::load_verified_manifest;
use sclego_core::io::report::{write_comparison, write_report, OutputFormat};
use sclego_core::io::snapshot::parse_holder_snapshot;
use sclego_core::io::trajectory::write_trajectory_csv;
use sclego_core::io::{fixed, read_text, source_name};
use sclego_core::peg::{simulate_batch, summarize, BatchSummary, Controller, SeedRun};
use sclego_core::report::{build_report, RiskReport};
use sclego_core::Error;
use serde::Serialize;

use crate::output::Outputs;
use crate::{CliError, CliResult, GlobalOpts};

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes to JSON");
    s.push('\n');
    s
}

fn read(path: &Path) -> CliResult<(String, String)> {
    Ok((read_text(path)?, source_name(path)))
}

pub fn metrics(g: &GlobalOpts, inputs: &Path) -> CliResult<Outputs> {
    let table = load_metrics_inputs(inputs)?.comparison()?;
    let mut out = Outputs::create(&g.out)?;
    for f in g.formats() {
        out.write(
            &format!("comparison.{}", f.extension()),
            &write_comparison(&table, f),
        )?;
    }
    Ok(out)
}

/// Assessment records, snapshots and reported totals of one dataset
/// directory, after checksum verification when a manifest is present.
pub struct Dataset {
    pub name: String,
    pub records: Vec<sclego_core::upstream::AssessmentRecord>,
    pub snapshots: BTreeMap<String, HolderSnapshot>,
    pub reported_totals: BTreeMap<String, f64>,
    pub note: Option<String>,
}

pub fn load_dataset(dir: &Path) -> CliResult<Dataset> {
    let note = if dir.join("manifest.toml").is_file() {
        load_verified_manifest(dir)?.note
    } else {
        log::warn!(
            "{}: no manifest.toml, checksums not verified",
            dir.display()
        );
        None
    };
    let (text, src) = read(&dir.join("assessments.csv"))?;
    let records = parse_assessments(&text, &src)?;

    let totals_path = dir.join("reported_totals.csv");
    let reported_totals = if totals_path.is_file() {
        let (text, src) = read(&totals_path)?;
        parse_reported_totals(&text, &src)?
    } else {
        BTreeMap::new()
    };

    let mut snapshots = BTreeMap::new();
    let snap_dir = dir.join("snapshots");
    if snap_dir.is_dir() {
        let mut paths: Vec<_> = std::fs::read_dir(&snap_dir)
            .map_err(|e| Error::Io {
                path: snap_dir.display().to_string(),
                source: e,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        paths.sort();
        for p in paths {
            let (text, src) = read(&p)?;
            let snap = parse_holder_snapshot(&text, &src)?;
            if snapshots.contains_key(&snap.symbol) {
                return Err(CliError::Input(format!(
                    "{src}: second snapshot for {}",
                    snap.symbol
                )));
            }
            snapshots.insert(snap.symbol.clone(), snap);
        }
    }
    let name = dir.file_name().map_or_else(
        || dir.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    Ok(Dataset {
        name,
        records,
        snapshots,
        reported_totals,
        note,
    })
}

pub fn score_dataset(g: &GlobalOpts, dataset: &Path, scale: Option<f64>) -> CliResult<RiskReport> {
    let mut cfg = g.run_config()?.score;
    if let Some(s) = scale {
        cfg.weights.scale *= s;
    }
    let ds = load_dataset(dataset)?;
    let mut report = build_report(
        &ds.name,
        &ds.records,
        &ds.snapshots,
        &cfg,
        &ds.reported_totals,
    )?;
    if let Some(note) = ds.note {
        report.notes.insert(0, note);
    }
    Ok(report)
}

pub fn score(g: &GlobalOpts, dataset: &Path, scale: Option<f64>) -> CliResult<Outputs> {
    let report = score_dataset(g, dataset, scale)?;
    let mut out = Outputs::create(&g.out)?;
    for f in g.formats() {
        out.write(
            &format!("report.{}", f.extension()),
            &write_report(&report, f),
        )?;
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct RunLine {
    seed: u64,
    terminal_price: f64,
    abs_deviation: f64,
    halted: bool,
    minted: f64,
    burned: f64,
}

#[derive(Debug, Serialize)]
struct SimulationSummary<'a> {
    scenario: String,
    controllers: Vec<&'static str>,
    peg_target: f64,
    summary: &'a BatchSummary,
    runs: Vec<RunLine>,
}

fn run_lines(runs: &[SeedRun], peg: f64) -> Vec<RunLine> {
    runs.iter()
        .map(|r| {
            let t = r.trajectory.terminal();
            RunLine {
                seed: r.seed,
                terminal_price: t.price,
                abs_deviation: (t.price - peg).abs(),
                halted: t.halted,
                minted: r.trajectory.total_minted(),
                burned: r.trajectory.total_burned(),
            }
        })
        .collect()
}

const SUMMARY_DECIMALS: usize = 6;

fn stats(s: &BatchSummary) -> [(&'static str, String); 8] {
    let f = |x| fixed(x, SUMMARY_DECIMALS);
    [
        ("runs", s.runs.to_string()),
        ("halted", s.halted.to_string()),
        ("min", f(s.min)),
        ("p05", f(s.p05)),
        ("median", f(s.median)),
        ("p95", f(s.p95)),
        ("max", f(s.max)),
        ("mean", f(s.mean)),
    ]
}

fn summary_csv(s: &SimulationSummary) -> String {
    let mut out = String::from("statistic,value\n");
    for (k, v) in stats(s.summary) {
        let _ = writeln!(out, "{k},{v}");
    }
    out.push_str("\nseed,terminal_price,abs_deviation,halted,minted,burned\n");
    let f = |x| fixed(x, SUMMARY_DECIMALS);
    for r in &s.runs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.seed,
            f(r.terminal_price),
            f(r.abs_deviation),
            u8::from(r.halted),
            f(r.minted),
            f(r.burned)
        );
    }
    out
}

fn summary_md(s: &SimulationSummary) -> String {
    let ctl = if s.controllers.is_empty() {
        "none".to_string()
    } else {
        s.controllers.join(", ")
    };
    let mut out = format!(
        "Scenario: {}. Controllers: {ctl}.\n\nTerminal |P - {}| over {} runs:\n\n| Statistic | Value |\n|---|---:|\n",
        s.scenario,
        s.peg_target,
        s.summary.runs
    );
    for (k, v) in stats(s.summary) {
        let _ = writeln!(out, "| {k} | {v} |");
    }
    out
}

pub fn simulate(
    g: &GlobalOpts,
    scenario: &Path,
    controllers: Option<&Path>,
    seeds: Option<&Path>,
    seed: Option<u64>,
) -> CliResult<Outputs> {
    let (text, src) = read(scenario)?;
    let file = parse_scenario(&text, &src)?;
    let ctl: Vec<Controller> = match controllers {
        Some(p) => {
            let (text, src) = read(p)?;
            parse_controllers(&text, &src)?.controller
        }
        None => Vec::new(),
    };
    let seeds: Vec<u64> = match (seeds, seed) {
        (Some(p), _) => {
            let (text, src) = read(p)?;
            parse_seeds(&text, &src)?
        }
        (None, Some(s)) => vec![s],
        (None, None) => vec![file.scenario.seed],
    };
    if seeds.is_empty() {
        return Err(CliError::Input("no seeds given".into()));
    }
    let runs = simulate_batch(&file.scenario, &ctl, &file.initial, &seeds)?;
    let peg = file.scenario.peg_target;
    let summary = summarize(&runs, peg).expect("at least one run");

    let mut out = Outputs::create(&g.out)?;
    for r in &runs {
        out.write(
            &format!("trajectories/seed-{}.csv", r.seed),
            &write_trajectory_csv(&r.trajectory),
        )?;
    }
    let name = scenario
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let doc = SimulationSummary {
        scenario: name,
        controllers: ctl.iter().map(Controller::kind_name).collect(),
        peg_target: peg,
        summary: &summary,
        runs: run_lines(&runs, peg),
    };
    for f in g.formats() {
        let body = match f {
            OutputFormat::Json => json(&doc),
            OutputFormat::Csv => summary_csv(&doc),
            OutputFormat::Md => summary_md(&doc),
        };
        out.write(&format!("summary.{}", f.extension()), &body)?;
    }
    Ok(out)
}

pub fn incidents(g: &GlobalOpts, input: &Path) -> CliResult<Outputs> {
    let (text, src) = read(input)?;
    let records = parse_incidents(&text, &src)?;
    let h = cause_histogram(&records);
    let mut out = Outputs::create(&g.out)?;
    for f in g.formats() {
        let body = match f {
            OutputFormat::Json => json(&h),
            OutputFormat::Csv => write_histogram_csv(&h),
            OutputFormat::Md => write_histogram_md(&h),
        };
        out.write(&format!("incidents.{}", f.extension()), &body)?;
    }
    Ok(out)
}
