//! First-order oracles driving the mirror-descent loop.

use crate::error::Result;
use crate::problem::Problem;
use crate::sparse::SparseVector;

/// Supplies (possibly stochastic) subgradients of the objective and of a single
/// constraint row at the current iterate.
pub trait FirstOrderOracle {
    fn objective_grad(&mut self, p: &Problem, x: &[f64]) -> Result<SparseVector>;

    /// Subgradient of row `row`, whose exact product `A_row^T x` is `product`.
    fn constraint_grad(&mut self, p: &Problem, x: &[f64], row: usize, product: f64) -> Result<SparseVector>;

    fn is_exact(&self) -> bool;
}

/// Deterministic oracle: returns the exact subgradients.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle;

impl FirstOrderOracle for ExactOracle {
    fn objective_grad(&mut self, p: &Problem, x: &[f64]) -> Result<SparseVector> {
        Ok(p.subgradient_objective(x))
    }

    fn constraint_grad(&mut self, p: &Problem, _x: &[f64], row: usize, product: f64) -> Result<SparseVector> {
        Ok(p.subgradient_constraint_at(row, product))
    }

    fn is_exact(&self) -> bool {
        true
    }
}

impl<T: FirstOrderOracle + ?Sized> FirstOrderOracle for &mut T {
    fn objective_grad(&mut self, p: &Problem, x: &[f64]) -> Result<SparseVector> {
        (**self).objective_grad(p, x)
    }

    fn constraint_grad(&mut self, p: &Problem, x: &[f64], row: usize, product: f64) -> Result<SparseVector> {
        (**self).constraint_grad(p, x, row, product)
    }

    fn is_exact(&self) -> bool {
        (**self).is_exact()
    }
}
