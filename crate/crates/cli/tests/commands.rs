//! Command behaviour through the library entry point and the built binary.

use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use sclego_cli::{run, Cli, CONFIG_ENV};
use sclego_core::io::incidents::parse_histogram_csv;
use sclego_core::io::report::{parse_comparison_json, parse_report_json};
use sclego_core::io::trajectory::parse_trajectory_csv;

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("sclego").chain(args.iter().copied())).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn bin() -> Process {
    let mut c = Process::new(env!("CARGO_BIN_EXE_sclego"));
    c.env_remove(CONFIG_ENV);
    c
}

#[test]
fn metrics_writes_each_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let written = run(&cli(&[
        "--out",
        out,
        "--format",
        "json,csv,md",
        "metrics",
        &data("collateral/metrics.toml"),
    ]))
    .unwrap();
    assert_eq!(written.paths().len(), 3);
    assert_eq!(
        read(&dir.path().join("comparison.md")),
        read(Path::new(&data("golden/comparison.md")))
    );
    let table = parse_comparison_json(&read(&dir.path().join("comparison.json")), "t").unwrap();
    assert_eq!(table.rows.len(), 3);
}

#[test]
fn score_matches_golden_and_scales() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    run(&cli(&[
        "--out",
        out.to_str().unwrap(),
        "score",
        &data("calibration-2025"),
    ]))
    .unwrap();
    assert_eq!(
        read(&out.join("report.md")),
        read(Path::new(&data("golden/risk_report.md")))
    );
    let base = parse_report_json(&read(&out.join("report.json")), "t").unwrap();

    let scaled_dir = dir.path().join("b");
    run(&cli(&[
        "--out",
        scaled_dir.to_str().unwrap(),
        "--format",
        "json",
        "score",
        "--scale",
        "10",
        &data("calibration-2025"),
    ]))
    .unwrap();
    let scaled = parse_report_json(&read(&scaled_dir.join("report.json")), "t").unwrap();
    for (a, b) in base.rows.iter().zip(&scaled.rows) {
        assert!((b.upstream.total - 10.0 * a.upstream.total).abs() < 1e-9);
    }
    let order = |r: &sclego_core::report::RiskReport| {
        let mut v: Vec<_> = r
            .rows
            .iter()
            .map(|x| (x.upstream.total, x.symbol.clone()))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.into_iter().map(|x| x.1).collect::<Vec<_>>()
    };
    assert_eq!(order(&base), order(&scaled));
}

#[test]
fn missing_snapshot_omits_downstream() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    std::fs::create_dir_all(ds.join("snapshots")).unwrap();
    let mut text = String::from("symbol,as_of,object,metric,evidence\n");
    for o in sclego_core::model::ImpactObjectName::ALL {
        text.push_str(&format!("ZERO,2025-01-01,{o},0,none\n"));
    }
    std::fs::write(ds.join("assessments.csv"), text).unwrap();
    let out = dir.path().join("out");
    run(&cli(&[
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
        "score",
        ds.to_str().unwrap(),
    ]))
    .unwrap();
    let r = parse_report_json(&read(&out.join("report.json")), "t").unwrap();
    assert_eq!(r.rows[0].upstream.total, 0.0);
    assert!(r.rows[0].downstream.is_none());
    assert!(r.notes.iter().any(|n| n.contains("no holder snapshot")));
}

#[test]
fn tampered_dataset_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    std::fs::create_dir_all(ds.join("snapshots")).unwrap();
    let src = PathBuf::from(data("calibration-2025"));
    for f in ["manifest.toml", "assessments.csv", "reported_totals.csv"] {
        std::fs::copy(src.join(f), ds.join(f)).unwrap();
    }
    for e in std::fs::read_dir(src.join("snapshots")).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, ds.join("snapshots").join(p.file_name().unwrap())).unwrap();
    }
    let mut a = read(&ds.join("assessments.csv"));
    a.push('\n');
    std::fs::write(ds.join("assessments.csv"), a).unwrap();
    let err = run(&cli(&[
        "--out",
        dir.path().join("o").to_str().unwrap(),
        "score",
        ds.to_str().unwrap(),
    ]))
    .unwrap_err();
    assert!(err.to_string().contains("checksum"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn incidents_reproduce_golden_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run(&cli(&[
        "--out",
        out,
        "--format",
        "csv,md",
        "incidents",
        &data("incidents.csv"),
    ]))
    .unwrap();
    let csv = read(&dir.path().join("incidents.csv"));
    assert_eq!(csv, read(Path::new(&data("golden/incidents.csv"))));
    assert_eq!(
        read(&dir.path().join("incidents.md")),
        read(Path::new(&data("golden/incidents.md")))
    );
    assert!(!dir.path().join("incidents.json").exists());
    let h = parse_histogram_csv(&csv, "t", 44).unwrap();
    assert_eq!(h.incidents, 44);
}

#[test]
fn empty_incident_file_gives_empty_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.csv");
    std::fs::write(&input, "").unwrap();
    let status = bin()
        .args([
            "--out",
            dir.path().join("o").to_str().unwrap(),
            "--format",
            "csv",
            "incidents",
        ])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(
        read(&dir.path().join("o/incidents.csv")),
        "cause,count,percent\n"
    );
}

#[test]
fn null_scenario_gives_flat_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let seeds = dir.path().join("seeds.txt");
    std::fs::write(&seeds, "1\n2\n3\n").unwrap();
    run(&cli(&[
        "--out",
        out,
        "simulate",
        &data("scenarios/null.toml"),
        "--controllers",
        &data("scenarios/controllers/none.toml"),
        "--seeds",
        seeds.to_str().unwrap(),
    ]))
    .unwrap();
    for s in 1..=3 {
        let p = dir.path().join(format!("trajectories/seed-{s}.csv"));
        let rows = parse_trajectory_csv(&read(&p), "t").unwrap();
        assert_eq!(rows.len(), 61);
        assert!(rows.iter().all(|r| r.price == 1.0));
    }
    assert!(read(&dir.path().join("summary.csv")).contains("median,0.000000"));
}

#[test]
fn death_spiral_summary_reports_depeg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run(&cli(&[
        "--out",
        out,
        "--format",
        "json",
        "simulate",
        &data("scenarios/reflexive-crash.toml"),
        "--controllers",
        &data("scenarios/controllers/supply-only.toml"),
        "--seeds",
        &data("scenarios/seeds.txt"),
    ]))
    .unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("summary.json"))).unwrap();
    assert_eq!(v["summary"]["runs"], 100);
    assert!(v["summary"]["median"].as_f64().unwrap() > 0.2);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let run_once = |dir: &Path| {
        let status = bin()
            .args(["--out", dir.to_str().unwrap(), "simulate", "--seed", "17"])
            .arg(data("scenarios/reflexive-crash.toml"))
            .args([
                "--controllers",
                &data("scenarios/controllers/liquidation.toml"),
            ])
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        (
            read(&dir.join("trajectories/seed-17.csv")),
            read(&dir.join("summary.json")),
        )
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run_once(a.path()), run_once(b.path()));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let code = |args: &[&str]| {
        bin()
            .arg("--out")
            .arg(&out)
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(code(&["metrics", "/definitely/missing.toml"]), Some(2));
    assert_eq!(
        code(&["--format", "pdf", "incidents", &data("incidents.csv")]),
        Some(2)
    );

    let bad = dir.path().join("bad.csv");
    std::fs::write(
        &bad,
        "no,project,stablecoin,blockchain,year,loss_usd,root_causes\n1,X,Y,Z,2022,5000,rug_pull\n",
    )
    .unwrap();
    let o = bin()
        .arg("--out")
        .arg(&out)
        .arg("incidents")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv:2"));

    let blowup = dir.path().join("blowup.toml");
    std::fs::write(
        &blowup,
        "[scenario]\nhorizon = 2.0\ndt = 1.0\ndrift = 1e308\n\n[initial]\nprice = 1e308\nsupply = 1.0\n",
    )
    .unwrap();
    let o = bin()
        .arg("--out")
        .arg(&out)
        .arg("simulate")
        .arg(&blowup)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("step 1"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn config_comes_from_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(
        &cfg,
        read(Path::new(&data("sclego.toml"))).replace("scale = 1.0", "scale = 2.0"),
    )
    .unwrap();
    let total = |out: &Path, via_env: bool| {
        let mut c = bin();
        c.arg("--out").arg(out).args(["--format", "json"]);
        if via_env {
            c.env(CONFIG_ENV, &cfg);
        } else {
            c.arg("--config").arg(&cfg);
        }
        assert!(c
            .arg("score")
            .arg(data("calibration-2025"))
            .output()
            .unwrap()
            .status
            .success());
        parse_report_json(&read(&out.join("report.json")), "t")
            .unwrap()
            .rows[0]
            .upstream
            .total
    };
    let a = total(&dir.path().join("a"), false);
    let b = total(&dir.path().join("b"), true);
    assert_eq!(a, b);
    assert!((a - 2.0 * 11.5684).abs() < 1e-3, "{a}");

    let o = bin()
        .env(CONFIG_ENV, dir.path().join("missing.toml"))
        .args([
            "--out",
            dir.path().join("c").to_str().unwrap(),
            "score",
            &data("calibration-2025"),
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
