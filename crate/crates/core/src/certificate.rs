//! Dual vector reconstructed from the non-productive steps, the closed-form
//! dual function of affine problems, and the resulting duality gap.

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::solver::{RunTrace, StepSizes};

/// `lambda_l = hit_counts[l] * h_g / (h_f * N_I)`.
pub fn dual_from_trace(trace: &RunTrace, steps: &StepSizes) -> Result<Vec<f64>> {
    if trace.n_productive == 0 {
        return Err(Error::NoProductiveSteps);
    }
    let scale = steps.h_g / (steps.h_f * trace.n_productive as f64);
    Ok(trace.hit_counts.iter().map(|&c| c as f64 * scale).collect())
}

/// `phi(lambda) = min_{x in Q} { c^T x + c0 + sum_l lambda_l (A_l^T x - b_l) }`.
/// Returns `-inf` on the orthant when the Lagrangian is unbounded below.
pub fn dual_value(p: &Problem, lambda: &[f64]) -> Result<f64> {
    if !p.is_affine() {
        return Err(Error::UnsupportedProblemClass("dual value needs affine objective and rows".into()));
    }
    if lambda.len() != p.m() {
        return Err(Error::DimensionMismatch(format!("lambda has length {}, m = {}", lambda.len(), p.m())));
    }
    if let Some(l) = lambda.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidConfig(format!("lambda[{l}] = {} is negative", lambda[l])));
    }
    let mut w = p.matrix().tr_mul_vec(lambda);
    for (j, cj) in p.objective().c.iter() {
        w[j] += cj;
    }
    let constant = p.objective().offset - lambda.iter().zip(p.offsets()).map(|(l, b)| l * b).sum::<f64>();
    Ok(p.set().min_linear(&w) + constant)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub xbar: Vec<f64>,
    pub lambda: Vec<f64>,
    pub f_val: f64,
    pub g_val: f64,
    pub phi_val: f64,
    /// `f_val - phi_val`, unclamped.
    pub gap: f64,
}

impl Certificate {
    pub fn lambda_nnz(&self) -> usize {
        self.lambda.iter().filter(|v| **v != 0.0).count()
    }

    /// Largest entries, descending, ties by row index.
    pub fn top_lambda(&self, k: usize) -> Vec<(usize, f64)> {
        let mut v: Vec<(usize, f64)> = self.lambda.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v.truncate(k);
        v
    }
}

pub fn duality_gap(p: &Problem, xbar: &[f64], lambda: &[f64]) -> Result<Certificate> {
    let phi_val = dual_value(p, lambda)?;
    let f_val = p.eval_objective(xbar);
    let g_val = p.eval_constraints_max(xbar).0;
    Ok(Certificate {
        xbar: xbar.to_vec(),
        lambda: lambda.to_vec(),
        f_val,
        g_val,
        phi_val,
        gap: f_val - phi_val,
    })
}

/// Certificate for a finished exact-oracle run.
pub fn certify(p: &Problem, trace: &RunTrace, steps: &StepSizes) -> Result<Certificate> {
    let lambda = dual_from_trace(trace, steps)?;
    duality_gap(p, trace.average_productive()?, &lambda)
}
