//! Liquidation and supply adjustment against literal transcriptions of the
//! published pseudocode, on random inputs. Equality is exact.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use sclego_core::peg::{
    liquidation_step, supply_adjust_step, LiquidationOutcome, LiquidationParams, SimState,
    SupplyAdjustmentParams,
};

const CASES: usize = 10_000;

fn uniform(rng: &mut Xoshiro256StarStar, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + (hi - lo) * u
}

/// Returns `Some(seized)` with the updated (value, debt), or `None` for "Safe".
fn liquidation_reference(
    current_value: f64,
    debt: f64,
    liquidation_threshold: f64,
    discount: f64,
    liquidation_rate: f64,
) -> (Option<f64>, f64, f64) {
    let mut value = current_value;
    let mut owed = debt;
    if current_value / debt < liquidation_threshold {
        let seized = current_value * (1.0 - discount);
        let repay = debt * liquidation_rate;
        owed -= repay;
        value -= seized;
        return (Some(seized), value, owed);
    }
    (None, value, owed)
}

/// Returns the new supply.
fn supply_reference(
    current_supply: f64,
    current_price: f64,
    target_price: f64,
    adjustment_coefficient: f64,
) -> f64 {
    let supply_change = current_supply * adjustment_coefficient * (current_price - target_price);
    if current_price > target_price {
        current_supply + supply_change
    } else {
        // burn(|supply_change|), never below zero
        let burn = supply_change.abs().min(current_supply);
        current_supply - burn
    }
}

#[test]
fn liquidation_matches_reference() {
    let mut rng = Xoshiro256StarStar::seed_from_u64(1);
    for _ in 0..CASES {
        let state = SimState {
            collateral_value: uniform(&mut rng, 0.0, 500.0),
            debt: uniform(&mut rng, 1e-6, 300.0),
            ..SimState::default()
        };
        let p = LiquidationParams {
            liquidation_threshold: uniform(&mut rng, 1.0, 2.5),
            discount: uniform(&mut rng, 0.0, 0.5),
            liquidation_rate: uniform(&mut rng, 0.0, 1.0),
        };
        let (want, value, debt) = liquidation_reference(
            state.collateral_value,
            state.debt,
            p.liquidation_threshold,
            p.discount,
            p.liquidation_rate,
        );
        let (next, outcome) = liquidation_step(&state, &p);
        match (outcome, want) {
            (LiquidationOutcome::Seized { seized, .. }, Some(w)) => assert_eq!(seized, w),
            (LiquidationOutcome::Safe, None) => {}
            other => panic!("{state:?} {p:?}: {other:?}"),
        }
        assert_eq!(next.collateral_value, value);
        assert_eq!(next.debt, debt);
        assert_eq!((next.price, next.supply), (state.price, state.supply));
    }
}

#[test]
fn supply_adjustment_matches_reference() {
    let mut rng = Xoshiro256StarStar::seed_from_u64(2);
    for i in 0..CASES {
        let supply = uniform(&mut rng, 0.0, 1e7);
        let target = uniform(&mut rng, 0.5, 1.5);
        // Every tenth case sits exactly on target.
        let price = if i % 10 == 0 {
            target
        } else {
            uniform(&mut rng, 0.0, 3.0)
        };
        let k = uniform(&mut rng, 0.0, 5.0);
        let state = SimState {
            supply,
            ..SimState::default()
        };
        let p = SupplyAdjustmentParams {
            adjustment_coefficient: k,
            target_price: target,
        };
        let (next, applied) = supply_adjust_step(&state, &p, price);
        assert_eq!(next.supply, supply_reference(supply, price, target, k));
        assert_eq!(next.supply, supply + applied);
        assert!(next.supply >= 0.0);
    }
}
