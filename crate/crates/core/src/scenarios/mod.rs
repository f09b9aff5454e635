//! End-to-end scenarios producing tables and pass/fail checks.

mod cone;
mod config;
mod qubit;
mod qutrit;
mod result;

pub use cone::*;
pub use config::*;
pub use qubit::*;
pub use qutrit::*;
pub use result::*;

use crate::error::Result;

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// `n` log-spaced points from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n).into_iter().map(f64::exp).collect()
}

pub fn run(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    match cfg.name {
        ScenarioName::AsymptoticPurification => run_asymptotic_purification(cfg),
        ScenarioName::FiniteTimePurification => run_finite_time_purification(cfg),
        ScenarioName::PureToMixed => run_pure_to_mixed(cfg),
        ScenarioName::N3Shooting => run_n3_shooting(cfg),
        ScenarioName::Cone2d => run_cone_2d(cfg),
        ScenarioName::Cone3d => run_cone_3d(cfg),
        ScenarioName::ConeSteadyState => run_cone_steady_state(cfg),
    }
}
