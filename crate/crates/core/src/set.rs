use crate::error::{Error, Result};

/// Feasible set `Q`.
#[derive(Debug, Clone, PartialEq)]
pub enum SetDescriptor {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Simplex { n: usize },
    NonnegativeOrthant { n: usize },
}

impl SetDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            SetDescriptor::Box { lo, .. } => lo.len(),
            SetDescriptor::Ball { center, .. } => center.len(),
            SetDescriptor::Simplex { n } | SetDescriptor::NonnegativeOrthant { n } => *n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::InvalidSet("dimension must be at least 1".into()));
        }
        match self {
            SetDescriptor::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(Error::InvalidSet(format!(
                        "box bounds have lengths {} and {}",
                        lo.len(),
                        hi.len()
                    )));
                }
                if let Some(j) = (0..lo.len()).find(|&j| !(lo[j] <= hi[j]) || !lo[j].is_finite() || !hi[j].is_finite()) {
                    return Err(Error::InvalidSet(format!(
                        "box coordinate {j}: need finite lo <= hi, got [{}, {}]",
                        lo[j], hi[j]
                    )));
                }
            }
            SetDescriptor::Ball { center, radius } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidSet(format!("ball radius must be positive, got {radius}")));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidSet("ball center must be finite".into()));
                }
            }
            SetDescriptor::Simplex { .. } | SetDescriptor::NonnegativeOrthant { .. } => {}
        }
        Ok(())
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, SetDescriptor::NonnegativeOrthant { .. })
    }

    /// Separable sets: Euclidean projection acts coordinate by coordinate.
    pub fn is_separable(&self) -> bool {
        matches!(self, SetDescriptor::Box { .. } | SetDescriptor::NonnegativeOrthant { .. })
    }

    /// Membership with absolute tolerance `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            SetDescriptor::Box { lo, hi } => {
                x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *v >= l - tol && *v <= h + tol)
            }
            SetDescriptor::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.sqrt() <= radius + tol
            }
            SetDescriptor::Simplex { .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol * x.len() as f64
            }
            SetDescriptor::NonnegativeOrthant { .. } => x.iter().all(|v| *v >= -tol),
        }
    }

    /// `min_{x in Q} <w, x>`; `-inf` when unbounded below.
    pub fn min_linear(&self, w: &[f64]) -> f64 {
        match self {
            SetDescriptor::Box { lo, hi } => w
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(w, (l, h))| if *w > 0.0 { w * l } else { w * h })
                .sum(),
            SetDescriptor::Ball { center, radius } => {
                let wz: f64 = w.iter().zip(center).map(|(a, b)| a * b).sum();
                let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                wz - radius * norm
            }
            SetDescriptor::Simplex { .. } => w.iter().copied().fold(f64::INFINITY, f64::min),
            SetDescriptor::NonnegativeOrthant { .. } => {
                if w.iter().all(|v| *v >= 0.0) {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Range `[min, max]` of `<a, x>` over `Q` for a sparse `a`.
    pub fn linear_range(&self, a: &crate::sparse::SparseVector) -> (f64, f64) {
        let dense = a.to_dense();
        let lo = self.min_linear(&dense);
        let neg: Vec<f64> = dense.iter().map(|v| -v).collect();
        let hi = -self.min_linear(&neg);
        (lo, hi)
    }
}
