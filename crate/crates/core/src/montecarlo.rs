//! Repeated seeded runs measuring how often the returned point misses the
//! `(eps_f, eps_g)` accuracy targets.

use crate::batch::{map_indexed, Execution};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::prox::ProxSetup;
use crate::solver::{solve_seeded, RunStatus, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run: u64,
    pub status: RunStatus,
    pub f_xbar: Option<f64>,
    pub g_xbar: Option<f64>,
    pub failed: bool,
}

#[derive(Debug, Clone)]
pub struct MonteCarloSummary {
    pub runs: u64,
    pub failures: u64,
    pub budget: u64,
    pub eps_f: f64,
    pub eps_g: f64,
    pub outcomes: Vec<RunOutcome>,
}

impl MonteCarloSummary {
    pub fn failure_fraction(&self) -> f64 {
        self.failures as f64 / self.runs as f64
    }

    /// Wilson score interval at ~95% confidence.
    pub fn confidence_interval(&self) -> (f64, f64) {
        wilson_interval(self.failures, self.runs, 1.959_963_984_540_054)
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// A run fails when it has no productive step, or `f(xbar) - f* > eps_f`, or
/// `g(xbar) > eps_g`.
pub fn monte_carlo(
    p: &Problem,
    setup: &ProxSetup,
    cfg: &SolverConfig,
    runs: u64,
    f_star: Option<f64>,
    exec: Execution,
) -> Result<MonteCarloSummary> {
    if runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    let f_star = f_star.ok_or(Error::MissingReferenceOptimum)?;
    let budget = crate::solver::iteration_budget(cfg, setup)?;
    let (eps_f, eps_g) = (cfg.eps_f(), cfg.eps_g);
    let results = map_indexed(runs, exec, |run| {
        solve_seeded(p, setup, cfg, run).map(|r| {
            let failed = match (r.f_xbar, r.g_xbar) {
                (Some(f), Some(g)) => f - f_star > eps_f || g > eps_g,
                _ => true,
            };
            RunOutcome {
                run,
                status: r.status(),
                f_xbar: r.f_xbar,
                g_xbar: r.g_xbar,
                failed,
            }
        })
    });
    let outcomes = results.into_iter().collect::<Result<Vec<_>>>()?;
    let failures = outcomes.iter().filter(|o| o.failed).count() as u64;
    Ok(MonteCarloSummary {
        runs,
        failures,
        budget,
        eps_f,
        eps_g,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 0 of 50 -> upper bound 0.0713
        let (lo, hi) = wilson_interval(0, 50, 1.959963984540054);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.071348).abs() < 1e-5);
        let (lo, hi) = wilson_interval(20, 200, 1.959963984540054);
        assert!(lo < 0.1 && hi > 0.1);
    }
}
