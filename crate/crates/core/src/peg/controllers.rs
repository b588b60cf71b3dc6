//! Stabilization controllers. Each step is a pure function of the state.

use serde::{Deserialize, Serialize};

use super::SimState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiquidationParams {
    /// Collateral-to-debt ratio below which a position is liquidated.
    pub liquidation_threshold: f64,
    pub discount: f64,
    /// Fraction of the debt repaid per liquidation.
    pub liquidation_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupplyAdjustmentParams {
    pub adjustment_coefficient: f64,
    pub target_price: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HedgingParams {
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmergencyParams {
    /// Halt once |price − peg| exceeds this bound.
    pub halt_bound: f64,
    /// Maximum reserve transferred into collateral per step while halted.
    pub bailout_size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Controller {
    Liquidation(LiquidationParams),
    SupplyAdjustment(SupplyAdjustmentParams),
    Hedging(HedgingParams),
    Emergency(EmergencyParams),
    Null,
}

impl Controller {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Controller::Liquidation(_) => "liquidation",
            Controller::SupplyAdjustment(_) => "supply_adjustment",
            Controller::Hedging(_) => "hedging",
            Controller::Emergency(_) => "emergency",
            Controller::Null => "null",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| {
            Err(Error::Config(format!(
                "{} controller: {m}",
                self.kind_name()
            )))
        };
        match *self {
            Controller::Liquidation(p) => {
                if !(p.liquidation_threshold > 1.0 && p.liquidation_threshold.is_finite()) {
                    return bad(format!(
                        "liquidation_threshold must exceed 1, got {}",
                        p.liquidation_threshold
                    ));
                }
                if !(0.0..1.0).contains(&p.discount) {
                    return bad(format!("discount must lie in [0,1), got {}", p.discount));
                }
                if !(p.liquidation_rate > 0.0 && p.liquidation_rate <= 1.0) {
                    return bad(format!(
                        "liquidation_rate must lie in (0,1], got {}",
                        p.liquidation_rate
                    ));
                }
            }
            Controller::SupplyAdjustment(p) => {
                if !(p.adjustment_coefficient > 0.0 && p.adjustment_coefficient.is_finite()) {
                    return bad(format!(
                        "adjustment_coefficient must be positive, got {}",
                        p.adjustment_coefficient
                    ));
                }
                if !(p.target_price.is_finite() && p.target_price >= 0.0) {
                    return bad(format!("invalid target_price {}", p.target_price));
                }
            }
            Controller::Hedging(p) => {
                if !(p.tolerance.is_finite() && p.tolerance >= 0.0) {
                    return bad(format!(
                        "tolerance must be nonnegative, got {}",
                        p.tolerance
                    ));
                }
            }
            Controller::Emergency(p) => {
                if !(p.halt_bound.is_finite() && p.halt_bound >= 0.0) {
                    return bad(format!(
                        "halt_bound must be nonnegative, got {}",
                        p.halt_bound
                    ));
                }
                if !(p.bailout_size.is_finite() && p.bailout_size >= 0.0) {
                    return bad(format!(
                        "bailout_size must be nonnegative, got {}",
                        p.bailout_size
                    ));
                }
            }
            Controller::Null => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LiquidationOutcome {
    Seized { seized: f64, repaid: f64 },
    Safe,
}

/// Liquidates when collateral/debt falls below the threshold: the
/// liquidator seizes the collateral at a discount and repays
/// `debt × liquidation_rate`. A position without debt is always safe.
pub fn liquidation_step(state: &SimState, p: &LiquidationParams) -> (SimState, LiquidationOutcome) {
    if state.debt <= 0.0 {
        return (*state, LiquidationOutcome::Safe);
    }
    if state.collateral_value / state.debt < p.liquidation_threshold {
        let seized = state.collateral_value * (1.0 - p.discount);
        let repaid = state.debt * p.liquidation_rate;
        let next = SimState {
            collateral_value: state.collateral_value - seized,
            debt: state.debt - repaid,
            ..*state
        };
        (next, LiquidationOutcome::Seized { seized, repaid })
    } else {
        (*state, LiquidationOutcome::Safe)
    }
}

/// Mints `supply × k × (observed − target)` above target and burns its
/// magnitude otherwise, never more than the outstanding supply. Returns the
/// signed supply change actually applied. No-op while halted.
pub fn supply_adjust_step(
    state: &SimState,
    p: &SupplyAdjustmentParams,
    observed_price: f64,
) -> (SimState, f64) {
    if state.halted {
        return (*state, 0.0);
    }
    let change = state.supply * p.adjustment_coefficient * (observed_price - p.target_price);
    let applied = if observed_price > p.target_price {
        change
    } else {
        -change.abs().min(state.supply)
    };
    let next = SimState {
        supply: state.supply + applied,
        ..*state
    };
    (next, applied)
}

/// Resets the short hedge to the spot exposure once they drift apart by more
/// than the tolerance. No-op while halted.
pub fn hedge_step(state: &SimState, p: &HedgingParams, spot_exposure: f64) -> SimState {
    if state.halted || (spot_exposure - state.hedge_short).abs() <= p.tolerance {
        return *state;
    }
    SimState {
        hedge_short: spot_exposure,
        ..*state
    }
}

/// Halts once the price leaves the band around the peg; while halted, moves
/// up to `bailout_size` from the reserve into collateral each step. Halting
/// is sticky.
pub fn emergency_step(state: &SimState, p: &EmergencyParams, peg: f64) -> SimState {
    let mut next = *state;
    if (state.price - peg).abs() > p.halt_bound {
        next.halted = true;
    }
    if next.halted && next.bailout_reserve > 0.0 {
        let transfer = p.bailout_size.min(next.bailout_reserve);
        next.collateral_value += transfer;
        next.bailout_reserve -= transfer;
    }
    next
}

/// Price level implied by the quantity equation `M·V = P·Q`.
pub fn implied_price_qtm(money_supply: f64, velocity: f64, real_output: f64) -> Result<f64> {
    if !(real_output > 0.0) {
        return Err(Error::Input(format!(
            "real output must be positive, got {real_output}"
        )));
    }
    Ok(money_supply * velocity / real_output)
}
