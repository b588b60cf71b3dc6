//! Peg-price simulation under stochastic shocks with pluggable controllers,
//! plus a scalar integrator for the upstream/downstream system equation.

pub mod controllers;
pub mod rng;
pub mod sim;
pub mod system;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use controllers::{
    emergency_step, hedge_step, implied_price_qtm, liquidation_step, supply_adjust_step,
    Controller, EmergencyParams, HedgingParams, LiquidationOutcome, LiquidationParams,
    SupplyAdjustmentParams,
};
pub use sim::{
    simulate, simulate_batch, summarize, BatchSummary, SeedRun, SupplyEvent, Trajectory,
};
pub use system::{integrate_system_dynamics, InternalDynamics, StepSignal, SystemPoint};

/// Protocol state at one instant. `t` is in days, monetary fields in USD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimState {
    #[serde(default)]
    pub t: f64,
    pub price: f64,
    pub supply: f64,
    #[serde(default)]
    pub collateral_value: f64,
    #[serde(default)]
    pub debt: f64,
    #[serde(default)]
    pub hedge_short: f64,
    #[serde(default)]
    pub halted: bool,
    #[serde(default)]
    pub bailout_reserve: f64,
}

impl Default for SimState {
    fn default() -> Self {
        Self {
            t: 0.0,
            price: 1.0,
            supply: 0.0,
            collateral_value: 0.0,
            debt: 0.0,
            hedge_short: 0.0,
            halted: false,
            bailout_reserve: 0.0,
        }
    }
}

impl SimState {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("t", self.t),
            ("price", self.price),
            ("supply", self.supply),
            ("collateral_value", self.collateral_value),
            ("debt", self.debt),
            ("hedge_short", self.hedge_short),
            ("bailout_reserve", self.bailout_reserve),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Input(format!("state field {name} is not finite")));
            }
        }
        for (name, v) in [
            ("price", self.price),
            ("supply", self.supply),
            ("bailout_reserve", self.bailout_reserve),
        ] {
            if v < 0.0 {
                return Err(Error::Input(format!("state field {name} is negative: {v}")));
            }
        }
        Ok(())
    }

    fn first_non_finite(&self) -> Option<&'static str> {
        [
            ("price", self.price),
            ("supply", self.supply),
            ("collateral_value", self.collateral_value),
            ("debt", self.debt),
            ("hedge_short", self.hedge_short),
            ("bailout_reserve", self.bailout_reserve),
        ]
        .into_iter()
        .find(|(_, v)| !v.is_finite())
        .map(|(name, _)| name)
    }
}

/// Diffusion coefficient σ(P).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Volatility {
    Constant {
        sigma: f64,
    },
    /// σ·P
    Proportional {
        sigma: f64,
    },
}

impl Volatility {
    pub fn at(&self, price: f64) -> f64 {
        match *self {
            Volatility::Constant { sigma } => sigma,
            Volatility::Proportional { sigma } => sigma * price,
        }
    }

    fn sigma(&self) -> f64 {
        match *self {
            Volatility::Constant { sigma } | Volatility::Proportional { sigma } => sigma,
        }
    }
}

impl Default for Volatility {
    fn default() -> Self {
        Volatility::Constant { sigma: 0.0 }
    }
}

/// Additive price impulse applied in the step whose interval `[t, t+dt)`
/// contains `time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shock {
    pub time: f64,
    pub impulse: f64,
}

/// Per-controller gains forming the control vector `B`. A zero gain keeps a
/// controller's effect on the state only.
///
/// Price pressures fed through the gains:
/// - supply adjustment: `−Δsupply / supply` (relative supply change);
/// - liquidation: `peg · min(1, collateral/debt) − P` while debt is
///   outstanding, the redemption value of one token against the market price;
/// - hedging and emergency: none.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlGains {
    #[serde(default)]
    pub supply_adjustment: f64,
    #[serde(default)]
    pub liquidation: f64,
    #[serde(default)]
    pub hedging: f64,
    #[serde(default)]
    pub emergency: f64,
}

fn default_peg() -> f64 {
    1.0
}

fn default_gain() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Simulated span in days.
    pub horizon: f64,
    /// Step size in days; must divide `horizon`.
    pub dt: f64,
    /// Linear drift coefficient `A` (1/day).
    #[serde(default)]
    pub drift: f64,
    #[serde(default)]
    pub gains: ControlGains,
    #[serde(default)]
    pub volatility: Volatility,
    #[serde(default)]
    pub shocks: Vec<Shock>,
    /// Steps by which controllers see a stale price.
    #[serde(default)]
    pub oracle_lag: usize,
    #[serde(default)]
    pub seed: u64,
    /// Upstream gain in the system equation.
    #[serde(default = "default_gain")]
    pub alpha: f64,
    /// Downstream gain in the system equation.
    #[serde(default = "default_gain")]
    pub beta: f64,
    #[serde(default = "default_peg")]
    pub peg_target: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            horizon: 1.0,
            dt: 1.0,
            drift: 0.0,
            gains: ControlGains::default(),
            volatility: Volatility::default(),
            shocks: Vec::new(),
            oracle_lag: 0,
            seed: 0,
            alpha: default_gain(),
            beta: default_gain(),
            peg_target: default_peg(),
        }
    }
}

impl ScenarioConfig {
    /// Number of Euler steps; errors unless `dt` divides the horizon.
    pub fn steps(&self) -> Result<usize> {
        let ratio = self.horizon / self.dt;
        let n = ratio.round();
        if (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Config(format!(
                "dt {} does not divide horizon {}",
                self.dt, self.horizon
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::Config(format!(
                "horizon {} must be at least dt {}",
                self.horizon, self.dt
            )));
        }
        self.steps()?;
        let sigma = self.volatility.sigma();
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::Config(format!(
                "sigma must be nonnegative, got {sigma}"
            )));
        }
        let g = self.gains;
        for (name, v) in [
            ("drift", self.drift),
            ("gains.supply_adjustment", g.supply_adjustment),
            ("gains.liquidation", g.liquidation),
            ("gains.hedging", g.hedging),
            ("gains.emergency", g.emergency),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if !(self.peg_target.is_finite() && self.peg_target > 0.0) {
            return Err(Error::Config(format!(
                "peg_target must be positive, got {}",
                self.peg_target
            )));
        }
        for s in &self.shocks {
            if !(s.time.is_finite() && s.impulse.is_finite() && s.time >= 0.0) {
                return Err(Error::Config(format!(
                    "invalid shock at time {} with impulse {}",
                    s.time, s.impulse
                )));
            }
        }
        Ok(())
    }
}
