//! TOML configuration files: scenarios, controller sets, seed lists and the
//! run configuration holding scoring parameters.
//!
//! Scenario file:
//!
//! ```toml
//! [scenario]
//! horizon = 60.0
//! dt = 0.1
//! oracle_lag = 10
//! volatility = { kind = "constant", sigma = 0.01 }
//! shocks = [{ time = 5.0, impulse = -0.4 }]
//! gains = { supply_adjustment = 1.0 }
//!
//! [initial]
//! price = 1.0
//! supply = 1e6
//! ```
//!
//! Controller file:
//!
//! ```toml
//! [[controller]]
//! kind = "supply_adjustment"
//! adjustment_coefficient = 2.0
//! target_price = 1.0
//! ```

use serde::{Deserialize, Serialize};

use crate::downstream::DEFAULT_ARCHETYPE_THRESHOLD;
use crate::error::{Error, Result};
use crate::model::WeightScheme;
use crate::peg::{Controller, ScenarioConfig, SimState};
use crate::upstream::RubricConfig;

fn toml_error(source: &str, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("{source}: {e}"))
}

fn to_toml<T: Serialize>(v: &T) -> String {
    toml::to_string(v).expect("plain data serializes to TOML")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: ScenarioConfig,
    pub initial: SimState,
}

pub fn parse_scenario(text: &str, source: &str) -> Result<ScenarioFile> {
    let f: ScenarioFile = toml::from_str(text).map_err(|e| toml_error(source, e))?;
    f.scenario.validate().map_err(|e| toml_error(source, e))?;
    f.initial.validate().map_err(|e| toml_error(source, e))?;
    Ok(f)
}

pub fn write_scenario(f: &ScenarioFile) -> String {
    to_toml(f)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSet {
    #[serde(default)]
    pub controller: Vec<Controller>,
}

pub fn parse_controllers(text: &str, source: &str) -> Result<ControllerSet> {
    let set: ControllerSet = toml::from_str(text).map_err(|e| toml_error(source, e))?;
    for c in &set.controller {
        c.validate().map_err(|e| toml_error(source, e))?;
    }
    Ok(set)
}

pub fn write_controllers(set: &ControllerSet) -> String {
    to_toml(set)
}

/// One seed per line; blank lines and `#` comments are skipped.
pub fn parse_seeds(text: &str, source: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let seed = line.parse().map_err(|_| {
            Error::parse(
                source,
                idx + 1,
                format!("'{line}' is not an unsigned 64-bit seed"),
            )
        })?;
        seeds.push(seed);
    }
    Ok(seeds)
}

pub fn write_seeds(seeds: &[u64]) -> String {
    seeds.iter().map(|s| format!("{s}\n")).collect()
}

fn default_threshold() -> f64 {
    DEFAULT_ARCHETYPE_THRESHOLD
}

/// Parameters of upstream/downstream scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreConfig {
    #[serde(default)]
    pub weights: WeightScheme,
    #[serde(default = "default_threshold")]
    pub archetype_threshold: f64,
    #[serde(default)]
    pub rubric: RubricConfig,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self {
            weights: WeightScheme::default(),
            archetype_threshold: DEFAULT_ARCHETYPE_THRESHOLD,
            rubric: RubricConfig::default(),
        }
    }
}

impl ScoreConfig {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        if !(self.archetype_threshold > 0.0 && self.archetype_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "archetype_threshold must lie in (0,1], got {}",
                self.archetype_threshold
            )));
        }
        Ok(())
    }
}

/// Contents of the file named by `--config` or the environment override.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub score: ScoreConfig,
}

pub fn parse_run_config(text: &str, source: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| toml_error(source, e))?;
    cfg.score.validate().map_err(|e| toml_error(source, e))?;
    Ok(cfg)
}

pub fn write_run_config(cfg: &RunConfig) -> String {
    to_toml(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CombineRule, FacetLevel};
    use crate::peg::{LiquidationParams, Shock, SupplyAdjustmentParams, Volatility};

    const SCENARIO: &str = r#"
[scenario]
horizon = 60.0
dt = 0.1
oracle_lag = 10
seed = 3
volatility = { kind = "proportional", sigma = 0.02 }
shocks = [{ time = 5.0, impulse = -0.4 }]
gains = { supply_adjustment = 1.0 }

[initial]
price = 1.0
supply = 1e6
"#;

    #[test]
    fn scenario_parses_and_round_trips() {
        let f = parse_scenario(SCENARIO, "t").unwrap();
        assert_eq!(f.scenario.oracle_lag, 10);
        assert_eq!(
            f.scenario.volatility,
            Volatility::Proportional { sigma: 0.02 }
        );
        assert_eq!(
            f.scenario.shocks,
            vec![Shock {
                time: 5.0,
                impulse: -0.4
            }]
        );
        assert_eq!(f.scenario.gains.liquidation, 0.0);
        assert_eq!(f.scenario.peg_target, 1.0);
        assert_eq!(f.initial.supply, 1e6);
        assert_eq!(parse_scenario(&write_scenario(&f), "t").unwrap(), f);
    }

    #[test]
    fn scenario_rejects_unknown_and_invalid() {
        assert!(parse_scenario(&SCENARIO.replace("oracle_lag", "oracle_delay"), "t").is_err());
        assert!(parse_scenario(&SCENARIO.replace("dt = 0.1", "dt = 0.0"), "t").is_err());
        assert!(parse_scenario(&SCENARIO.replace("dt = 0.1", "dt = 0.7"), "t").is_err());
        assert!(parse_scenario(
            &SCENARIO.replace("[initial]\nprice = 1.0\n", "[initial]\n"),
            "t"
        )
        .is_err());
        assert!(parse_scenario(&SCENARIO.replace("\"proportional\"", "\"jumpy\""), "t").is_err());
    }

    #[test]
    fn controllers_parse_and_round_trip() {
        let text = r#"
[[controller]]
kind = "liquidation"
liquidation_threshold = 1.5
discount = 0.1
liquidation_rate = 0.5

[[controller]]
kind = "supply_adjustment"
adjustment_coefficient = 2.0
target_price = 1.0

[[controller]]
kind = "null"
"#;
        let set = parse_controllers(text, "t").unwrap();
        assert_eq!(
            set.controller,
            vec![
                Controller::Liquidation(LiquidationParams {
                    liquidation_threshold: 1.5,
                    discount: 0.1,
                    liquidation_rate: 0.5
                }),
                Controller::SupplyAdjustment(SupplyAdjustmentParams {
                    adjustment_coefficient: 2.0,
                    target_price: 1.0
                }),
                Controller::Null,
            ]
        );
        assert_eq!(
            parse_controllers(&write_controllers(&set), "t").unwrap(),
            set
        );
        assert!(parse_controllers(&text.replace("1.5", "0.9"), "t").is_err());
        assert!(parse_controllers(&text.replace("discount", "haircut"), "t").is_err());
    }

    #[test]
    fn seeds_parse_and_round_trip() {
        let s = parse_seeds("# seeds\n0\n1 # one\n\n18446744073709551615\n", "t").unwrap();
        assert_eq!(s, vec![0, 1, u64::MAX]);
        assert_eq!(parse_seeds(&write_seeds(&s), "t").unwrap(), s);
        match parse_seeds("1\n-2\n", "t").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn run_config_defaults_and_overrides() {
        let cfg = parse_run_config("", "t").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let text = r#"
[score]
archetype_threshold = 0.6
[score.weights]
combine = "sum"
scale = 10.0
levels = { E1 = 1, E2 = 2, E3 = 3, I1 = 1, I2 = 2, I3 = 3, L1 = 1, L2 = 2, L3 = 3 }
"#;
        let cfg = parse_run_config(text, "t").unwrap();
        assert_eq!(cfg.score.weights.combine, CombineRule::Sum);
        assert_eq!(cfg.score.weights.levels[&FacetLevel::L3], 3.0);
        assert_eq!(parse_run_config(&write_run_config(&cfg), "t").unwrap(), cfg);
        assert!(parse_run_config("[score]\narchetype_threshold = 0.0\n", "t").is_err());
        assert!(parse_run_config("[score.weights]\nlevels = { E1 = 1 }\n", "t").is_err());
    }
}
