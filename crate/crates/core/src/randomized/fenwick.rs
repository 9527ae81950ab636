use super::rng::Rng;
use crate::error::{Error, Result};

/// Cumulative-weight (Fenwick) tree over a sparse support, for sampling an
/// index with probability proportional to its weight in `O(log support)`.
#[derive(Debug, Clone)]
pub struct FenwickSampler {
    support: Vec<usize>,
    // 1-based Fenwick array, tree[0] unused
    tree: Vec<f64>,
    total: f64,
}

impl FenwickSampler {
    /// `indices` are the coordinates the weights belong to.
    pub fn new(indices: &[usize], weights: &[f64]) -> Result<Self> {
        assert_eq!(indices.len(), weights.len());
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidConfig(format!("sampler weight {w} is not a finite nonnegative number")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::AllZeroWeights);
        }
        let len = weights.len();
        let mut tree = vec![0.0; len + 1];
        tree[1..].copy_from_slice(weights);
        for i in 1..=len {
            let parent = i + (i & i.wrapping_neg());
            if parent <= len {
                tree[parent] += tree[i];
            }
        }
        Ok(FenwickSampler {
            support: indices.to_vec(),
            tree,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Sum of the first `k` support weights.
    pub fn prefix(&self, mut k: usize) -> f64 {
        let mut s = 0.0;
        while k > 0 {
            s += self.tree[k];
            k &= k - 1;
        }
        s
    }

    /// Probability of drawing the `k`-th support entry, as the tree stores it.
    pub fn probability(&self, k: usize) -> f64 {
        (self.prefix(k + 1) - self.prefix(k)) / self.total
    }

    /// Support position `k` with `prefix(k) <= u * total < prefix(k + 1)`.
    pub fn position_for(&self, u: f64) -> usize {
        let len = self.support.len();
        let mut rem = u * self.total;
        let mut pos = 0;
        let mut step = if len == 0 { 0 } else { 1usize << (usize::BITS - 1 - len.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= len && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        if pos >= len {
            // u * total rounded up to the total; fall back to the last positive weight
            pos = (0..len).rev().find(|&k| self.probability(k) > 0.0).unwrap_or(len - 1);
        }
        pos
    }

    /// Coordinate drawn for uniform `u` in `[0, 1)`.
    pub fn index_for(&self, u: f64) -> usize {
        self.support[self.position_for(u)]
    }

    pub fn sample(&self, rng: &mut Rng) -> usize {
        self.index_for(rng.uniform())
    }
}
