//! Randomized 2-sparse subgradient estimator.
//!
//! A row `a = a+ - a-` is split into nonnegative parts. One coordinate `i` is
//! drawn with probability `a+_i / ||a+||_1` and, independently, one `j` with
//! probability `a-_j / ||a-||_1`. The estimate
//! `(||a+||_1 e_i - ||a-||_1 e_j) * sigma'` is unbiased for `sigma' * a` and
//! has at most two nonzeros, so a Euclidean mirror step moves at most two
//! coordinates of the iterate.

mod fenwick;
mod rng;

use std::collections::HashMap;

pub use fenwick::FenwickSampler;
pub use rng::Rng;

use crate::error::Result;
use crate::oracle::FirstOrderOracle;
use crate::problem::Problem;
use crate::sparse::SparseVector;

/// Nonnegative positive/negative parts of a row and their l1 norms.
#[derive(Debug, Clone, PartialEq)]
pub struct PosNeg {
    pub pos: SparseVector,
    pub neg: SparseVector,
    pub pos_norm: f64,
    pub neg_norm: f64,
}

pub fn decompose_pos_neg(row: &SparseVector) -> PosNeg {
    let (mut pi, mut pv, mut ni, mut nv) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (i, v) in row.iter() {
        if v > 0.0 {
            pi.push(i);
            pv.push(v);
        } else if v < 0.0 {
            ni.push(i);
            nv.push(-v);
        }
    }
    let pos_norm = pv.iter().sum();
    let neg_norm = nv.iter().sum();
    PosNeg {
        pos: SparseVector::from_sorted(row.dim(), pi, pv),
        neg: SparseVector::from_sorted(row.dim(), ni, nv),
        pos_norm,
        neg_norm,
    }
}

/// Samplers for one row; a side with zero norm has no sampler.
#[derive(Debug, Clone)]
pub struct RowSampler {
    dim: usize,
    pos: Option<FenwickSampler>,
    neg: Option<FenwickSampler>,
    pos_norm: f64,
    neg_norm: f64,
}

impl RowSampler {
    /// `None` for an all-zero row (its constraint is constant).
    pub fn new(row: &SparseVector) -> Option<Self> {
        if row.is_zero() {
            return None;
        }
        let parts = decompose_pos_neg(row);
        let side = |v: &SparseVector| FenwickSampler::new(v.indices(), v.values()).ok();
        Some(RowSampler {
            dim: row.dim(),
            pos: side(&parts.pos),
            neg: side(&parts.neg),
            pos_norm: parts.pos_norm,
            neg_norm: parts.neg_norm,
        })
    }

    pub fn pos_norm(&self) -> f64 {
        self.pos_norm
    }

    pub fn neg_norm(&self) -> f64 {
        self.neg_norm
    }

    pub fn pos(&self) -> Option<&FenwickSampler> {
        self.pos.as_ref()
    }

    pub fn neg(&self) -> Option<&FenwickSampler> {
        self.neg.as_ref()
    }

    /// One realization of `(||a+|| e_i - ||a-|| e_j) * sigma_prime`.
    pub fn stochastic_grad(&self, sigma_prime: f64, rng: &mut Rng) -> SparseVector {
        if sigma_prime == 0.0 {
            return SparseVector::zeros(self.dim);
        }
        let mut pairs = Vec::with_capacity(2);
        if let Some(s) = &self.pos {
            pairs.push((s.sample(rng), self.pos_norm * sigma_prime));
        }
        if let Some(s) = &self.neg {
            pairs.push((s.sample(rng), -self.neg_norm * sigma_prime));
        }
        SparseVector::from_pairs(self.dim, pairs).expect("sampled indices are in range")
    }

    /// Exact expectation of [`RowSampler::stochastic_grad`], summing over every
    /// `(i, j)` outcome with the probabilities stored in the trees.
    pub fn expected_grad_enumeration(&self, sigma_prime: f64) -> Vec<f64> {
        let outcomes = |s: &Option<FenwickSampler>| -> Vec<(Option<usize>, f64)> {
            match s {
                Some(t) => (0..t.len()).map(|k| (Some(t.support()[k]), t.probability(k))).collect(),
                None => vec![(None, 1.0)],
            }
        };
        let mut mean = vec![0.0; self.dim];
        for (i, pi) in outcomes(&self.pos) {
            for (j, pj) in outcomes(&self.neg) {
                let p = pi * pj;
                if let Some(i) = i {
                    mean[i] += p * self.pos_norm * sigma_prime;
                }
                if let Some(j) = j {
                    mean[j] -= p * self.neg_norm * sigma_prime;
                }
            }
        }
        mean
    }

    /// Worst-case squared l2 norm of a realization divided by `sigma'^2`.
    pub fn norm_sq_bound(&self) -> f64 {
        self.pos_norm * self.pos_norm + self.neg_norm * self.neg_norm
    }
}

/// Oracle that samples constraint subgradients (and optionally the objective
/// gradient) with the 2-sparse estimator. Row samplers are built on first use.
#[derive(Debug, Clone)]
pub struct RandomizedOracle {
    rng: Rng,
    cache: HashMap<usize, Option<RowSampler>>,
    randomize_objective: bool,
    objective: Option<Option<RowSampler>>,
}

impl RandomizedOracle {
    pub fn new(rng: Rng) -> Self {
        RandomizedOracle {
            rng,
            cache: HashMap::new(),
            randomize_objective: false,
            objective: None,
        }
    }

    pub fn randomize_objective(mut self, on: bool) -> Self {
        self.randomize_objective = on;
        self
    }

    /// Number of row samplers built so far.
    pub fn cached_rows(&self) -> usize {
        self.cache.len()
    }
}

impl FirstOrderOracle for RandomizedOracle {
    fn objective_grad(&mut self, p: &Problem, x: &[f64]) -> Result<SparseVector> {
        if !self.randomize_objective {
            return Ok(p.subgradient_objective(x));
        }
        let obj = p.objective();
        let fprime = if obj.func.is_linear() { 1.0 } else { obj.func.derivative(obj.c.dot(x)) };
        let sampler = self.objective.get_or_insert_with(|| RowSampler::new(&obj.c));
        Ok(match sampler {
            Some(s) => s.stochastic_grad(fprime, &mut self.rng),
            None => SparseVector::zeros(p.n()),
        })
    }

    fn constraint_grad(&mut self, p: &Problem, _x: &[f64], row: usize, product: f64) -> Result<SparseVector> {
        let sigma_prime = p.row_fn(row).derivative(product);
        let sampler = self
            .cache
            .entry(row)
            .or_insert_with(|| RowSampler::new(&p.matrix().row_vector(row)));
        let out = match sampler {
            Some(s) => s.stochastic_grad(sigma_prime, &mut self.rng),
            None => SparseVector::zeros(p.n()),
        };
        Ok(out)
    }

    fn is_exact(&self) -> bool {
        false
    }
}
