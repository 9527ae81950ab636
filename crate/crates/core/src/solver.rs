//! Switching mirror descent: objective steps while the constraint is within
//! tolerance, constraint steps on the most violated row otherwise. Only the
//! productive iterates enter the output average.

use crate::engine::{CostCounter, ProductState};
use crate::error::{Error, Result};
use crate::oracle::{ExactOracle, FirstOrderOracle};
use crate::problem::{DualNorm, Problem};
use crate::prox::{ProxKind, ProxSetup};
use crate::randomized::{RandomizedOracle, Rng};

/// Constant in the high-probability budget.
pub const DEVIATION_CONSTANT: f64 = 81.0;

/// The sharper constant `(4 + sqrt 18)^2`.
pub fn tight_deviation_constant() -> f64 {
    let c = 4.0 + 18f64.sqrt();
    c * c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetMode {
    /// `ceil(2 M_g^2 Rbar^2 / eps_g^2) + 1`; certificate-grade.
    Deterministic,
    /// Smallest `N > 2 M_g^2 R^2 / eps_g^2`; needs a user-supplied `R^2`.
    Expectation,
    /// `ceil(C M_g^2 Rbar^2 / eps_g^2 * ln(1/sigma))`.
    StochasticHP,
    Manual(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Exact,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackerKind {
    SegmentTree,
    /// Dense baseline: recompute the max by a full scan every iteration.
    Scan,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub eps_g: f64,
    /// `None` keeps the coupling `eps_f = M_f eps_g / M_g`.
    pub eps_f: Option<f64>,
    pub mf: f64,
    pub mg: f64,
    pub sigma: f64,
    pub budget: BudgetMode,
    pub deviation_constant: f64,
    pub seed: u64,
    pub oracle: OracleMode,
    /// Randomize the objective gradient as well (randomized mode only).
    pub randomize_objective: bool,
    /// Keep one record per iteration.
    pub verbose_trace: bool,
    /// Include `f(x^k)` in the per-iteration records.
    pub log_objective: bool,
    pub refresh_interval: Option<u64>,
    pub tracker: TrackerKind,
}

impl SolverConfig {
    pub fn new(eps_g: f64, mf: f64, mg: f64) -> Self {
        SolverConfig {
            eps_g,
            eps_f: None,
            mf,
            mg,
            sigma: 0.1,
            budget: BudgetMode::Deterministic,
            deviation_constant: DEVIATION_CONSTANT,
            seed: 0,
            oracle: OracleMode::Exact,
            randomize_objective: false,
            verbose_trace: false,
            log_objective: false,
            refresh_interval: Some(crate::engine::DEFAULT_REFRESH_INTERVAL),
            tracker: TrackerKind::SegmentTree,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("eps_g", self.eps_g)?;
        positive("M_f", self.mf)?;
        positive("M_g", self.mg)?;
        if let Some(e) = self.eps_f {
            positive("eps_f", e)?;
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidConfig(format!("sigma must lie in (0, 1), got {}", self.sigma)));
        }
        positive("deviation constant", self.deviation_constant)?;
        if self.budget == BudgetMode::Manual(0) {
            return Err(Error::InvalidConfig("iteration budget must be at least 1".into()));
        }
        Ok(())
    }

    pub fn eps_f(&self) -> f64 {
        self.eps_f.unwrap_or(self.mf * self.eps_g / self.mg)
    }

    /// `max(M_g^2 / eps_g^2, M_f^2 / eps_f^2)`; equals `M_g^2 / eps_g^2` when coupled.
    fn accuracy_ratio_sq(&self) -> f64 {
        let g = (self.mg / self.eps_g).powi(2);
        match self.eps_f {
            None => g,
            Some(ef) => g.max((self.mf / ef).powi(2)),
        }
    }
}

/// Fills `mf`/`mg` from problem data: l2 (Euclidean) or l-infinity (entropy)
/// norms of the exact subgradients, or l1 row norms for the randomized estimator.
pub fn default_bounds(p: &Problem, setup: &ProxSetup, oracle: OracleMode, randomize_objective: bool) -> Result<(f64, f64)> {
    let exact = p.gradient_bounds(setup.dual_norm())?;
    match oracle {
        OracleMode::Exact => Ok(exact),
        OracleMode::Randomized => {
            let l1 = p.gradient_bounds(DualNorm::L1)?;
            Ok((if randomize_objective { l1.0 } else { exact.0 }, l1.1))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSizes {
    pub h_f: f64,
    pub h_g: f64,
}

/// `h_g = eps_g / M_g^2`, `h_f = eps_g / (M_f M_g)`; with a decoupled `eps_f`,
/// `h_f = eps_f / M_f^2`.
pub fn step_sizes(cfg: &SolverConfig) -> StepSizes {
    let h_g = cfg.eps_g / (cfg.mg * cfg.mg);
    let h_f = match cfg.eps_f {
        None => cfg.eps_g / (cfg.mf * cfg.mg),
        Some(ef) => ef / (cfg.mf * cfg.mf),
    };
    StepSizes { h_f, h_g }
}

/// `ceil`, except that values within relative 1e-9 of an integer snap to it,
/// so that e.g. `8 / 0.1^2` counts as 800.
fn ceil_snapped(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

pub fn iteration_budget(cfg: &SolverConfig, setup: &ProxSetup) -> Result<u64> {
    cfg.validate()?;
    let ratio = cfg.accuracy_ratio_sq();
    let rbar2 = || setup.radius_bound().map_err(|_| Error::MissingRadiusBound);
    let n = match cfg.budget {
        BudgetMode::Manual(n) => n,
        BudgetMode::Deterministic => ceil_snapped(2.0 * ratio * rbar2()?) + 1,
        BudgetMode::Expectation => {
            let r2 = setup.r2().ok_or(Error::MissingRadiusBound)?;
            let x = 2.0 * ratio * r2;
            let r = x.round();
            if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
                r as u64 + 1
            } else {
                x.ceil() as u64
            }
        }
        BudgetMode::StochasticHP => {
            ceil_snapped(cfg.deviation_constant * ratio * rbar2()? * (1.0 / cfg.sigma).ln())
        }
    };
    Ok(n.max(1))
}

/// Lazily maintained sum of the productive iterates. Coordinates are only
/// touched when they change, so sparse steps stay sparse.
#[derive(Debug, Clone)]
pub struct ProductiveAverager {
    acc: Vec<f64>,
    stamp: Vec<u64>,
    count: u64,
}

impl ProductiveAverager {
    pub fn new(n: usize) -> Self {
        ProductiveAverager {
            acc: vec![0.0; n],
            stamp: vec![0; n],
            count: 0,
        }
    }

    /// Counts the current iterate.
    pub fn include(&mut self) {
        self.count += 1;
    }

    /// Must be called with the old value before coordinate `j` changes.
    pub fn before_change(&mut self, j: usize, old: f64) {
        let k = self.count - self.stamp[j];
        if k > 0 {
            self.acc[j] += old * k as f64;
            self.stamp[j] = self.count;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Mean of the counted iterates, given the current iterate.
    pub fn mean(&self, current: &[f64]) -> Option<Vec<f64>> {
        if self.count == 0 {
            return None;
        }
        let c = self.count as f64;
        Some(
            (0..self.acc.len())
                .map(|j| (self.acc[j] + current[j] * (self.count - self.stamp[j]) as f64) / c)
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    /// 1-based iteration number.
    pub k: u64,
    pub productive: bool,
    /// Row stepped on (non-productive iterations only).
    pub row: Option<usize>,
    pub g: f64,
    pub f: Option<f64>,
    /// Productive iterations so far, including this one.
    pub n_productive: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    NoProductiveSteps,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub iterations: u64,
    pub n_productive: u64,
    pub n_nonproductive: u64,
    /// Non-productive steps taken on each row.
    pub hit_counts: Vec<u64>,
    pub xbar: Option<Vec<f64>>,
    pub last_iterate: Vec<f64>,
    pub log: Vec<IterRecord>,
}

impl RunTrace {
    pub fn status(&self) -> RunStatus {
        if self.n_productive >= 1 {
            RunStatus::Ok
        } else {
            RunStatus::NoProductiveSteps
        }
    }

    /// `(1/N_I) sum_{k in I} x^k`.
    pub fn average_productive(&self) -> Result<&[f64]> {
        self.xbar.as_deref().ok_or(Error::NoProductiveSteps)
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub trace: RunTrace,
    pub steps: StepSizes,
    pub eps_g: f64,
    pub eps_f: f64,
    pub budget: u64,
    pub cost: CostCounter,
    /// `f(xbar)` and `g(xbar)`, evaluated from scratch.
    pub f_xbar: Option<f64>,
    pub g_xbar: Option<f64>,
}

impl RunReport {
    pub fn status(&self) -> RunStatus {
        self.trace.status()
    }
}

/// Runs exactly `iteration_budget(cfg, setup)` iterations from the start point
/// of `setup` with the given oracle.
pub fn run<O: FirstOrderOracle>(p: &Problem, setup: &ProxSetup, cfg: &SolverConfig, mut oracle: O) -> Result<RunReport> {
    cfg.validate()?;
    if setup.set() != p.set() {
        return Err(Error::IncompatibleProx("prox setup was built for a different set".into()));
    }
    let budget = iteration_budget(cfg, setup)?;
    let steps = step_sizes(cfg);
    let a = p.matrix();
    let n = p.n();
    let x1 = setup.start_point().to_vec();
    let mut state = match cfg.tracker {
        TrackerKind::SegmentTree => ProductState::new(a, p, x1)?,
        TrackerKind::Scan => ProductState::new_scan(a, p, x1)?,
    };
    state.set_refresh_interval(cfg.refresh_interval);

    let mut avg = ProductiveAverager::new(n);
    let mut hit_counts = vec![0u64; p.m()];
    let mut log = Vec::new();

    for k in 1..=budget {
        let (g, l) = state.max_query().expect("m >= 1");
        let productive = g <= cfg.eps_g;
        let (grad, h) = if productive {
            avg.include();
            (oracle.objective_grad(p, state.x())?, steps.h_f)
        } else {
            hit_counts[l] += 1;
            let y_l = state.products()[l];
            (oracle.constraint_grad(p, state.x(), l, y_l)?, steps.h_g)
        };
        if cfg.verbose_trace {
            log.push(IterRecord {
                k,
                productive,
                row: (!productive).then_some(l),
                g,
                f: cfg.log_objective.then(|| p.eval_objective(state.x())),
                n_productive: avg.count(),
            });
        }
        if grad.is_zero() {
            continue;
        }
        if let Some(deltas) = setup.sparse_euclidean_step(state.x(), &grad, h) {
            let x = state.x();
            for &(j, new) in &deltas {
                if new != x[j] {
                    avg.before_change(j, x[j]);
                }
            }
            state.apply_delta(a, p, &deltas)?;
        } else {
            let next = setup.mirror_step(state.x(), &grad, h);
            let x = state.x();
            for j in 0..n {
                if next[j] != x[j] {
                    avg.before_change(j, x[j]);
                }
            }
            state.reset(a, p, next)?;
        }
    }

    let xbar = avg.mean(state.x());
    let (f_xbar, g_xbar) = match &xbar {
        Some(xb) => (Some(p.eval_objective(xb)), Some(p.eval_constraints_max(xb).0)),
        None => (None, None),
    };
    let n_productive = avg.count();
    Ok(RunReport {
        trace: RunTrace {
            iterations: budget,
            n_productive,
            n_nonproductive: budget - n_productive,
            hit_counts,
            xbar,
            last_iterate: state.x().to_vec(),
            log,
        },
        steps,
        eps_g: cfg.eps_g,
        eps_f: cfg.eps_f(),
        budget,
        cost: state.cost(),
        f_xbar,
        g_xbar,
    })
}

/// Runs with the oracle selected by `cfg.oracle`; the randomized oracle draws
/// from stream `run_index` of `cfg.seed`.
pub fn solve_seeded(p: &Problem, setup: &ProxSetup, cfg: &SolverConfig, run_index: u64) -> Result<RunReport> {
    match cfg.oracle {
        OracleMode::Exact => run(p, setup, cfg, ExactOracle),
        OracleMode::Randomized => {
            let oracle = RandomizedOracle::new(Rng::for_run(cfg.seed, run_index))
                .randomize_objective(cfg.randomize_objective);
            run(p, setup, cfg, oracle)
        }
    }
}

pub fn solve(p: &Problem, setup: &ProxSetup, cfg: &SolverConfig) -> Result<RunReport> {
    solve_seeded(p, setup, cfg, 0)
}

/// Convenience: prox setup of the requested kind on the problem's own set.
pub fn setup_for(p: &Problem, kind: ProxKind) -> Result<ProxSetup> {
    ProxSetup::new(kind, p.set().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemSpec;
    use crate::set::SetDescriptor;
    use approx::assert_relative_eq;

    fn cfg(eps_g: f64, mf: f64, mg: f64) -> SolverConfig {
        SolverConfig::new(eps_g, mf, mg)
    }

    #[test]
    fn step_size_examples() {
        let s = step_sizes(&cfg(0.1, 1.0, 2.0));
        assert_relative_eq!(s.h_g, 0.025);
        assert_relative_eq!(s.h_f, 0.05);
        assert_eq!(step_sizes(&cfg(1.0, 1.0, 1.0)), StepSizes { h_f: 1.0, h_g: 1.0 });
        let s = step_sizes(&cfg(0.01, 5.0, 10.0));
        assert_relative_eq!(s.h_g, 1e-4);
        assert_relative_eq!(s.h_f, 2e-4);
    }

    fn unit_box_setup(rbar2: f64) -> ProxSetup {
        ProxSetup::euclidean(SetDescriptor::Box { lo: vec![0.0], hi: vec![1.0] }).unwrap().with_rbar2(rbar2)
    }

    #[test]
    fn budget_examples() {
        let setup = unit_box_setup(1.0);
        let mut c = cfg(0.1, 1.0, 2.0);
        assert_eq!(iteration_budget(&c, &setup).unwrap(), 801);
        c.budget = BudgetMode::StochasticHP;
        c.sigma = 0.1;
        // 32400 * ln 10 = 74603.757...
        assert_eq!(iteration_budget(&c, &setup).unwrap(), 74604);
        c.budget = BudgetMode::Manual(500);
        assert_eq!(iteration_budget(&c, &setup).unwrap(), 500);
    }

    #[test]
    fn expectation_budget_needs_r2() {
        let mut c = cfg(0.1, 1.0, 2.0);
        c.budget = BudgetMode::Expectation;
        assert!(matches!(iteration_budget(&c, &unit_box_setup(1.0)), Err(Error::MissingRadiusBound)));
        // 2 * 400 * 0.5 = 400 exactly -> strict inequality gives 401
        assert_eq!(iteration_budget(&c, &unit_box_setup(1.0).with_r2(0.5)).unwrap(), 401);
    }

    #[test]
    fn unbounded_set_needs_rbar2() {
        let setup = ProxSetup::euclidean(SetDescriptor::NonnegativeOrthant { n: 2 }).unwrap();
        assert!(matches!(iteration_budget(&cfg(0.1, 1.0, 1.0), &setup), Err(Error::MissingRadiusBound)));
    }

    #[test]
    fn invalid_configs() {
        assert!(cfg(0.0, 1.0, 1.0).validate().is_err());
        assert!(cfg(0.1, -1.0, 1.0).validate().is_err());
        let mut c = cfg(0.1, 1.0, 1.0);
        c.sigma = 1.0;
        assert!(c.validate().is_err());
        c.sigma = 0.5;
        c.budget = BudgetMode::Manual(0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn tight_constant() {
        // 16 + 8*sqrt(18) + 18
        assert_relative_eq!(tight_deviation_constant(), 34.0 + 24.0 * 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn averager_examples() {
        let mut a = ProductiveAverager::new(2);
        a.include();
        a.before_change(0, 0.0);
        a.before_change(1, 0.0);
        a.include();
        assert_eq!(a.mean(&[2.0, 2.0]).unwrap(), vec![1.0, 1.0]);

        let mut b = ProductiveAverager::new(3);
        b.include();
        assert_eq!(b.mean(&[0.5, -1.0, 3.0]).unwrap(), vec![0.5, -1.0, 3.0]);
        assert!(ProductiveAverager::new(1).mean(&[0.0]).is_none());
    }

    #[test]
    fn forced_no_productive_steps() {
        // start (0, 0) violates 1 - x1 <= 0 by 1 > eps_g
        let p = Problem::build(ProblemSpec::affine(
            SetDescriptor::Box { lo: vec![0.0; 2], hi: vec![2.0; 2] },
            vec![1.0, 1.0],
            vec![-1.0],
            vec![(0, 0, -1.0)],
        ))
        .unwrap();
        let setup = setup_for(&p, ProxKind::Euclidean).unwrap();
        let mut c = cfg(0.05, 2f64.sqrt(), 1.0);
        c.budget = BudgetMode::Manual(1);
        let r = solve(&p, &setup, &c).unwrap();
        assert_eq!(r.status(), RunStatus::NoProductiveSteps);
        assert!(matches!(r.trace.average_productive(), Err(Error::NoProductiveSteps)));
        assert_eq!(r.trace.hit_counts, vec![1]);
    }
}
