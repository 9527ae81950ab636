//! Random instance generators for tests, benchmarks and the `gen` command.

use rand::seq::index::sample;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::randomized::Rng;
use crate::set::SetDescriptor;

/// How nonzeros are laid out in the constraint matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sparsity {
    /// Exactly `k` nonzeros per row.
    PerRow(usize),
    /// Exactly `k` nonzeros per column.
    PerColumn(usize),
}

#[derive(Debug, Clone)]
pub struct InstanceParams {
    pub n: usize,
    pub m: usize,
    pub sparsity: Sparsity,
    /// Nonzeros in `c`; `None` for dense.
    pub c_nnz: Option<usize>,
    /// Nonzero magnitudes are drawn from `[min_abs, max_abs]` with random sign.
    pub min_abs: f64,
    pub max_abs: f64,
    /// Slack range of the Slater point `x0 = (1/2, ..., 1/2)`.
    pub slack: (f64, f64),
}

impl InstanceParams {
    pub fn box_lp(n: usize, m: usize, sparsity: Sparsity) -> Self {
        InstanceParams {
            n,
            m,
            sparsity,
            c_nnz: None,
            min_abs: 0.1,
            max_abs: 1.0,
            slack: (0.05, 0.3),
        }
    }
}

fn signed(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.random_range(lo..=hi);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Sparse `m x n` triplets with the requested layout.
pub fn random_triplets(rng: &mut Rng, m: usize, n: usize, sparsity: Sparsity, lo: f64, hi: f64) -> Result<Vec<(usize, usize, f64)>> {
    let mut t = Vec::new();
    match sparsity {
        Sparsity::PerRow(k) => {
            if k > n {
                return Err(Error::InvalidConfig(format!("{k} nonzeros per row exceeds n={n}")));
            }
            for i in 0..m {
                let mut cols = sample(rng, n, k).into_vec();
                cols.sort_unstable();
                for j in cols {
                    t.push((i, j, signed(rng, lo, hi)));
                }
            }
        }
        Sparsity::PerColumn(k) => {
            if k > m {
                return Err(Error::InvalidConfig(format!("{k} nonzeros per column exceeds m={m}")));
            }
            for j in 0..n {
                for i in sample(rng, m, k) {
                    t.push((i, j, signed(rng, lo, hi)));
                }
            }
        }
    }
    Ok(t)
}

/// LP over the unit box `[0, 1]^n` with a strictly feasible center point, so
/// Slater's condition holds with margin at least `slack.0`.
pub fn random_box_lp(rng: &mut Rng, params: &InstanceParams) -> Result<ProblemSpec> {
    let InstanceParams { n, m, sparsity, c_nnz, min_abs, max_abs, slack } = *params;
    if n == 0 || m == 0 {
        return Err(Error::InvalidConfig("n and m must be positive".into()));
    }
    let triplets = random_triplets(rng, m, n, sparsity, min_abs, max_abs)?;
    let mut c = vec![0.0; n];
    match c_nnz {
        None => c.iter_mut().for_each(|v| *v = signed(rng, min_abs, max_abs)),
        Some(k) => {
            for j in sample(rng, n, k.min(n)) {
                c[j] = signed(rng, min_abs, max_abs);
            }
        }
    }
    let mut b = vec![0.0; m];
    for &(i, _, v) in &triplets {
        b[i] += 0.5 * v;
    }
    for bi in &mut b {
        *bi += rng.random_range(slack.0..=slack.1);
    }
    Ok(ProblemSpec::affine(
        SetDescriptor::Box { lo: vec![0.0; n], hi: vec![1.0; n] },
        c,
        b,
        triplets,
    ))
}
