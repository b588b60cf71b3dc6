//! Trajectory CSV: `t,P,supply,collateral,debt,halted`, one row per
//! recorded state, `halted` as 0/1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{parse_f64, read_csv};
use crate::peg::{SimState, Trajectory};

const HEADER: [&str; 6] = ["t", "P", "supply", "collateral", "debt", "halted"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub price: f64,
    pub supply: f64,
    pub collateral: f64,
    pub debt: f64,
    pub halted: bool,
}

impl From<&SimState> for TrajectoryRow {
    fn from(s: &SimState) -> Self {
        Self {
            t: s.t,
            price: s.price,
            supply: s.supply,
            collateral: s.collateral_value,
            debt: s.debt,
            halted: s.halted,
        }
    }
}

pub fn trajectory_rows(tr: &Trajectory) -> Vec<TrajectoryRow> {
    tr.states.iter().map(TrajectoryRow::from).collect()
}

pub fn write_trajectory_rows(rows: &[TrajectoryRow]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.t,
            r.price,
            r.supply,
            r.collateral,
            r.debt,
            u8::from(r.halted)
        );
    }
    out
}

pub fn write_trajectory_csv(tr: &Trajectory) -> String {
    write_trajectory_rows(&trajectory_rows(tr))
}

pub fn parse_trajectory_csv(text: &str, source: &str) -> Result<Vec<TrajectoryRow>> {
    let csv = read_csv(text, source, &HEADER, 0)?;
    csv.rows
        .iter()
        .map(|(line, row)| {
            let f = |i: usize| parse_f64(source, *line, HEADER[i], &row[i]);
            let halted = match row[5].as_str() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::parse(
                        source,
                        *line,
                        format!("halted must be 0 or 1, got '{other}'"),
                    ))
                }
            };
            Ok(TrajectoryRow {
                t: f(0)?,
                price: f(1)?,
                supply: f(2)?,
                collateral: f(3)?,
                debt: f(4)?,
                halted,
            })
        })
        .collect()
}
