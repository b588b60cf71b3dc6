//! Forward-Euler integration of `dS/dt = α·UP(t) + β·DN(t) + f(S)` for a
//! scalar system state `S` (a market-cap index by default).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-constant signal. Each `(time, value)` pair holds from its time
/// until the next breakpoint; before the first breakpoint the signal is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSignal {
    breakpoints: Vec<(f64, f64)>,
}

impl StepSignal {
    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: vec![(f64::NEG_INFINITY, value)],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Breakpoint times must be strictly increasing.
    pub fn from_steps(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        for w in breakpoints.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Input(format!(
                    "step signal times must increase: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if breakpoints.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::Input("step signal values must be finite".into()));
        }
        Ok(Self { breakpoints })
    }

    pub fn at(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|(bt, _)| *bt <= t);
        if idx == 0 {
            0.0
        } else {
            self.breakpoints[idx - 1].1
        }
    }
}

/// Intrinsic term `f(S)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InternalDynamics {
    #[default]
    None,
    /// `λ·S`
    Linear { lambda: f64 },
    /// `r·S·(1 − S/K)`
    Logistic { rate: f64, capacity: f64 },
}

impl InternalDynamics {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            InternalDynamics::None => 0.0,
            InternalDynamics::Linear { lambda } => lambda * s,
            InternalDynamics::Logistic { rate, capacity } => rate * s * (1.0 - s / capacity),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemPoint {
    pub t: f64,
    pub s: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn integrate_system_dynamics(
    s0: f64,
    up: &StepSignal,
    dn: &StepSignal,
    alpha: f64,
    beta: f64,
    internal: InternalDynamics,
    horizon: f64,
    dt: f64,
) -> Result<Vec<SystemPoint>> {
    if !(dt > 0.0 && dt.is_finite() && horizon >= dt && horizon.is_finite()) {
        return Err(Error::Config(format!(
            "need 0 < dt <= horizon, got dt {dt}, horizon {horizon}"
        )));
    }
    if let InternalDynamics::Logistic { capacity, .. } = internal {
        if !(capacity > 0.0) {
            return Err(Error::Config(format!(
                "logistic capacity must be positive, got {capacity}"
            )));
        }
    }
    let steps = (horizon / dt).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = s0;
    out.push(SystemPoint { t: 0.0, s });
    for n in 0..steps {
        let t = n as f64 * dt;
        s += (alpha * up.at(t) + beta * dn.at(t) + internal.eval(s)) * dt;
        if !s.is_finite() {
            return Err(Error::Numeric {
                step: n + 1,
                message: "system state became non-finite".into(),
            });
        }
        out.push(SystemPoint {
            t: (n + 1) as f64 * dt,
            s,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gains_keep_state_constant() {
        let up = StepSignal::constant(3.0);
        let out =
            integrate_system_dynamics(5.0, &up, &up, 0.0, 0.0, InternalDynamics::None, 10.0, 0.1)
                .unwrap();
        assert_eq!(out.len(), 101);
        assert!(out.iter().all(|p| p.s == 5.0));
    }

    #[test]
    fn constant_upstream_grows_linearly() {
        let c = 0.7;
        let out = integrate_system_dynamics(
            2.0,
            &StepSignal::constant(c),
            &StepSignal::zero(),
            1.0,
            0.0,
            InternalDynamics::None,
            5.0,
            0.01,
        )
        .unwrap();
        for p in &out {
            assert!((p.s - (2.0 + c * p.t)).abs() < 1e-9);
        }
    }

    #[test]
    fn linear_internal_dynamics_track_exponential() {
        let lambda = 0.3;
        let err = |dt: f64| {
            integrate_system_dynamics(
                1.0,
                &StepSignal::zero(),
                &StepSignal::zero(),
                0.0,
                0.0,
                InternalDynamics::Linear { lambda },
                2.0,
                dt,
            )
            .unwrap()
            .iter()
            .map(|p| (p.s - (lambda * p.t).exp()).abs())
            .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.01), err(0.005));
        assert!(e1 < 0.02);
        let ratio = e1 / e2;
        assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn logistic_settles_at_capacity() {
        let out = integrate_system_dynamics(
            0.1,
            &StepSignal::zero(),
            &StepSignal::zero(),
            0.0,
            0.0,
            InternalDynamics::Logistic {
                rate: 1.0,
                capacity: 4.0,
            },
            40.0,
            0.01,
        )
        .unwrap();
        assert!((out.last().unwrap().s - 4.0).abs() < 1e-6);
    }

    #[test]
    fn step_signal_lookup() {
        let s = StepSignal::from_steps(vec![(1.0, 2.0), (3.0, -1.0)]).unwrap();
        assert_eq!(s.at(0.5), 0.0);
        assert_eq!(s.at(1.0), 2.0);
        assert_eq!(s.at(2.9), 2.0);
        assert_eq!(s.at(10.0), -1.0);
        assert!(StepSignal::from_steps(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
    }
}
