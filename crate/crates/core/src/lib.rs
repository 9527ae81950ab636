//! Switching mirror descent for convex problems with functional constraints.
//!
//! The method alternates between objective steps, taken while the constraint
//! is satisfied to tolerance `eps_g`, and constraint steps on the most violated
//! row otherwise. Averaging the productive iterates gives a point that is
//! `eps_f`-optimal and `eps_g`-feasible after a budget that does not depend on
//! the size of the dual solution; the step counts on each row also give a dual
//! vector whose duality gap certifies the result.
//!
//! Huge sparse instances are handled by [`engine`], which keeps all row
//! products and the constraint maximum up to date in `O(s_m log m)` per changed
//! coordinate, and by [`randomized`], which replaces constraint subgradients
//! by unbiased 2-sparse estimates.

// `!(v >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod bench;
pub mod certificate;
pub mod engine;
pub mod error;
pub mod generate;
pub mod io;
pub mod montecarlo;
pub mod oracle;
pub mod problem;
pub mod prox;
pub mod randomized;
pub mod set;
pub mod solver;
pub mod sparse;

pub use certificate::{certify, dual_from_trace, dual_value, duality_gap, Certificate};
pub use error::{Error, Result};
pub use oracle::{ExactOracle, FirstOrderOracle};
pub use problem::{DualNorm, Problem, ProblemSpec, ScalarConvex, ScalarFn};
pub use prox::{ProxKind, ProxSetup};
pub use randomized::{RandomizedOracle, Rng};
pub use set::SetDescriptor;
pub use solver::{
    iteration_budget, run, solve, solve_seeded, step_sizes, BudgetMode, OracleMode, RunReport, RunStatus,
    RunTrace, SolverConfig, StepSizes, TrackerKind,
};
pub use sparse::SparseVector;

/// Fixed 17-significant-digit formatting used by every text output.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
