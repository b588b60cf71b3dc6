//! Euler–Maruyama integration of the controlled peg SDE.
//!
//! One step, from state `S_n` at `t_n = n·dt`:
//!
//! 1. record `S_n`;
//! 2. controllers see the price from `oracle_lag` steps earlier (the initial
//!    price before enough history exists);
//! 3. controllers run in the fixed order emergency, liquidation, supply
//!    adjustment, hedging, whatever order they were listed in;
//! 4. `P ← max(0, P + (A·P + Σ gain·u)·dt + σ(P)·√dt·Z + shocks)`, where
//!    shocks are those timed in `[t_n, t_n + dt)`.
//!
//! One normal is drawn per step even when σ = 0, so the stream position
//! depends only on the step index.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::controllers::{
    emergency_step, hedge_step, liquidation_step, supply_adjust_step, Controller,
};
use super::rng::NormalStream;
use super::{ScenarioConfig, SimState};
use crate::error::{Error, Result};

/// A mint (positive) or burn (negative) applied at a step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplyEvent {
    pub step: usize,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `steps + 1` states, the initial one first.
    pub states: Vec<SimState>,
    pub supply_events: Vec<SupplyEvent>,
}

impl Trajectory {
    pub fn terminal(&self) -> &SimState {
        self.states
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn total_minted(&self) -> f64 {
        self.supply_events
            .iter()
            .filter(|e| e.amount > 0.0)
            .map(|e| e.amount)
            .sum()
    }

    pub fn total_burned(&self) -> f64 {
        self.supply_events
            .iter()
            .filter(|e| e.amount < 0.0)
            .map(|e| -e.amount)
            .sum()
    }
}

fn order_rank(c: &Controller) -> u8 {
    match c {
        Controller::Emergency(_) => 0,
        Controller::Liquidation(_) => 1,
        Controller::SupplyAdjustment(_) => 2,
        Controller::Hedging(_) => 3,
        Controller::Null => 4,
    }
}

fn shock_schedule(config: &ScenarioConfig, steps: usize) -> Vec<f64> {
    let mut per_step = vec![0.0; steps];
    for s in &config.shocks {
        // Small tolerance so a shock timed exactly on a grid point lands in
        // the step starting there despite rounding in time/dt.
        let idx = (s.time / config.dt + 1e-9).floor();
        if idx >= 0.0 && (idx as usize) < steps {
            per_step[idx as usize] += s.impulse;
        }
    }
    per_step
}

/// Runs one scenario with `config.seed`.
pub fn simulate(
    config: &ScenarioConfig,
    controllers: &[Controller],
    initial: &SimState,
) -> Result<Trajectory> {
    config.validate()?;
    initial.validate()?;
    for c in controllers {
        c.validate()?;
    }
    let steps = config.steps()?;
    let mut ordered: Vec<&Controller> = controllers.iter().collect();
    ordered.sort_by_key(|c| order_rank(c));

    let shocks = shock_schedule(config, steps);
    let mut normals = NormalStream::new(config.seed);
    let sqrt_dt = config.dt.sqrt();
    let peg = config.peg_target;
    let gains = config.gains;

    let mut states = Vec::with_capacity(steps + 1);
    let mut supply_events = Vec::new();
    let mut state = SimState { t: 0.0, ..*initial };

    for n in 0..steps {
        states.push(state);
        let observed = states[n.saturating_sub(config.oracle_lag)].price;

        let mut pressure = 0.0;
        for c in &ordered {
            match c {
                Controller::Emergency(p) => state = emergency_step(&state, p, peg),
                Controller::Liquidation(p) => {
                    state = liquidation_step(&state, p).0;
                    if state.debt > 0.0 {
                        let backing = (state.collateral_value / state.debt).min(1.0);
                        pressure += gains.liquidation * (peg * backing - state.price);
                    }
                }
                Controller::SupplyAdjustment(p) => {
                    let before = state.supply;
                    let (next, applied) = supply_adjust_step(&state, p, observed);
                    state = next;
                    if applied != 0.0 {
                        supply_events.push(SupplyEvent {
                            step: n,
                            amount: applied,
                        });
                    }
                    if before > 0.0 {
                        pressure += gains.supply_adjustment * (-applied / before);
                    }
                }
                Controller::Hedging(p) => {
                    state = hedge_step(&state, p, state.collateral_value);
                }
                Controller::Null => {}
            }
        }

        let z = normals.next_normal();
        let p = state.price;
        let next = p
            + (config.drift * p + pressure) * config.dt
            + config.volatility.at(p) * sqrt_dt * z
            + shocks[n];
        state.price = next.max(0.0);
        state.t = (n + 1) as f64 * config.dt;

        if let Some(field) = state.first_non_finite() {
            return Err(Error::Numeric {
                step: n + 1,
                message: format!("{field} became non-finite"),
            });
        }
    }
    states.push(state);
    Ok(Trajectory {
        states,
        supply_events,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub trajectory: Trajectory,
}

/// Runs the scenario once per seed in parallel. Output order follows `seeds`.
pub fn simulate_batch(
    config: &ScenarioConfig,
    controllers: &[Controller],
    initial: &SimState,
    seeds: &[u64],
) -> Result<Vec<SeedRun>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let cfg = ScenarioConfig {
                seed,
                ..config.clone()
            };
            simulate(&cfg, controllers, initial)
                .map(|trajectory| SeedRun { seed, trajectory })
                .map_err(|e| match e {
                    Error::Numeric { step, message } => Error::Numeric {
                        step,
                        message: format!("seed {seed}: {message}"),
                    },
                    other => other,
                })
        })
        .collect::<Vec<_>>()
        // First failure in seed order, independent of scheduling.
        .into_iter()
        .collect()
}

/// Distribution of terminal |P − peg| across a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: usize,
    pub halted: usize,
    pub min: f64,
    pub p05: f64,
    pub median: f64,
    pub p95: f64,
    pub max: f64,
    pub mean: f64,
}

/// Linear-interpolation quantile on sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(runs: &[SeedRun], peg: f64) -> Option<BatchSummary> {
    if runs.is_empty() {
        return None;
    }
    let mut dev: Vec<f64> = runs
        .iter()
        .map(|r| (r.trajectory.terminal().price - peg).abs())
        .collect();
    dev.sort_by(f64::total_cmp);
    Some(BatchSummary {
        runs: runs.len(),
        halted: runs
            .iter()
            .filter(|r| r.trajectory.terminal().halted)
            .count(),
        min: dev[0],
        p05: quantile(&dev, 0.05),
        median: quantile(&dev, 0.5),
        p95: quantile(&dev, 0.95),
        max: dev[dev.len() - 1],
        mean: dev.iter().sum::<f64>() / dev.len() as f64,
    })
}
