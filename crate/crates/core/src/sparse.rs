//! Sorted index/value vectors used for subgradients and matrix rows.

use crate::error::{Error, Result};

/// Sparse vector with strictly increasing 0-based indices and no explicit zeros.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from unsorted pairs. Duplicates are summed and zeros dropped.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut pairs: Vec<(usize, f64)> = pairs.into_iter().collect();
        for &(i, v) in &pairs {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            if !v.is_finite() {
                return Err(Error::DimensionMismatch(format!(
                    "non-finite value {v} at index {i}"
                )));
            }
        }
        pairs.sort_by_key(|&(i, _)| i);
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            if indices.last() == Some(&i) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(i);
                values.push(v);
            }
        }
        let mut out = SparseVector {
            dim,
            indices,
            values,
        };
        out.prune();
        Ok(out)
    }

    pub fn from_dense(x: &[f64]) -> Self {
        let (indices, values) = x
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .unzip();
        SparseVector {
            dim: x.len(),
            indices,
            values,
        }
    }

    /// Unchecked constructor for callers that already hold sorted, distinct indices.
    pub(crate) fn from_sorted(dim: usize, indices: Vec<usize>, values: Vec<f64>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        let mut out = SparseVector {
            dim,
            indices,
            values,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| *v != 0.0) {
            return;
        }
        let mut k = 0;
        for r in 0..self.indices.len() {
            if self.values[r] != 0.0 {
                self.indices[k] = self.indices[r];
                self.values[k] = self.values[r];
                k += 1;
            }
        }
        self.indices.truncate(k);
        self.values.truncate(k);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_zero(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, i: usize) -> f64 {
        match self.indices.binary_search(&i) {
            Ok(k) => self.values[k],
            Err(_) => 0.0,
        }
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * x[i]).sum()
    }

    pub fn scaled(&self, s: f64) -> SparseVector {
        if s == 0.0 {
            return SparseVector::zeros(self.dim);
        }
        SparseVector::from_sorted(
            self.dim,
            self.indices.clone(),
            self.values.iter().map(|v| v * s).collect(),
        )
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    pub fn norm2_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}
