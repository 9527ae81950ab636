//! Prox functions, Bregman divergences and the mirror (prox-mapping) step.

use crate::error::{Error, Result};
use crate::problem::DualNorm;
use crate::set::SetDescriptor;
use crate::sparse::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProxKind {
    /// `d(x) = ||x - x1||^2 / 2`, 1-strongly convex in l2.
    Euclidean,
    /// `d(x) = sum x_i ln x_i + ln n` on the simplex, 1-strongly convex in l1.
    Entropy,
}

#[derive(Debug, Clone)]
pub struct ProxSetup {
    kind: ProxKind,
    set: SetDescriptor,
    x1: Vec<f64>,
    r2: Option<f64>,
    rbar2: Option<f64>,
}

impl ProxSetup {
    /// Euclidean setup with the default center 0.
    pub fn euclidean(set: SetDescriptor) -> Result<Self> {
        let n = set.dim();
        Self::euclidean_centered(set, vec![0.0; n])
    }

    /// Euclidean setup whose start point is the projection of `center` onto `Q`.
    pub fn euclidean_centered(set: SetDescriptor, center: Vec<f64>) -> Result<Self> {
        set.validate()?;
        if center.len() != set.dim() {
            return Err(Error::DimensionMismatch(format!(
                "center has length {}, set has dimension {}",
                center.len(),
                set.dim()
            )));
        }
        let x1 = match &set {
            SetDescriptor::Ball { center: c, .. } => c.clone(),
            _ => project_euclidean(&set, center),
        };
        Ok(ProxSetup {
            kind: ProxKind::Euclidean,
            set,
            x1,
            r2: None,
            rbar2: None,
        })
    }

    pub fn entropy(set: SetDescriptor) -> Result<Self> {
        set.validate()?;
        let SetDescriptor::Simplex { n } = set else {
            return Err(Error::IncompatibleProx("entropy prox requires the simplex".into()));
        };
        Ok(ProxSetup {
            kind: ProxKind::Entropy,
            set,
            x1: vec![1.0 / n as f64; n],
            r2: None,
            rbar2: None,
        })
    }

    pub fn new(kind: ProxKind, set: SetDescriptor) -> Result<Self> {
        match kind {
            ProxKind::Euclidean => Self::euclidean(set),
            ProxKind::Entropy => Self::entropy(set),
        }
    }

    /// User-supplied `R^2 >= V_{x1}(x*)`.
    pub fn with_r2(mut self, r2: f64) -> Self {
        self.r2 = Some(r2);
        self
    }

    /// User-supplied `Rbar^2`; overrides the computed bound.
    pub fn with_rbar2(mut self, rbar2: f64) -> Self {
        self.rbar2 = Some(rbar2);
        self
    }

    pub fn kind(&self) -> ProxKind {
        self.kind
    }

    pub fn set(&self) -> &SetDescriptor {
        &self.set
    }

    pub fn r2(&self) -> Option<f64> {
        self.r2
    }

    pub fn start_point(&self) -> &[f64] {
        &self.x1
    }

    /// Norm dual to the one `d` is strongly convex in.
    pub fn dual_norm(&self) -> DualNorm {
        match self.kind {
            ProxKind::Euclidean => DualNorm::L2,
            ProxKind::Entropy => DualNorm::LInf,
        }
    }

    pub fn prox_value(&self, x: &[f64]) -> f64 {
        match self.kind {
            ProxKind::Euclidean => 0.5 * sq_dist(x, &self.x1),
            ProxKind::Entropy => x.iter().map(|&v| xlogx(v)).sum::<f64>() + (x.len() as f64).ln(),
        }
    }

    pub fn prox_gradient(&self, x: &[f64]) -> Vec<f64> {
        match self.kind {
            ProxKind::Euclidean => x.iter().zip(&self.x1).map(|(a, b)| a - b).collect(),
            ProxKind::Entropy => x.iter().map(|v| v.ln() + 1.0).collect(),
        }
    }

    /// `V_x(y) = d(y) - d(x) - <grad d(x), y - x>`.
    pub fn bregman(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", x.len(), y.len())));
        }
        match self.kind {
            ProxKind::Euclidean => Ok(0.5 * sq_dist(x, y)),
            ProxKind::Entropy => {
                let mut v = 0.0;
                for (i, (&xi, &yi)) in x.iter().zip(y).enumerate() {
                    if yi > 0.0 {
                        if !(xi > 0.0) {
                            return Err(Error::DomainError(format!("x[{i}] = {xi} while y[{i}] = {yi} > 0")));
                        }
                        v += yi * (yi / xi).ln();
                    }
                    v += xi - yi;
                }
                Ok(v)
            }
        }
    }

    /// `argmin_{y in Q} { <h v, y - x> + V_x(y) }`.
    pub fn mirror_step(&self, x: &[f64], v: &SparseVector, h: f64) -> Vec<f64> {
        if v.is_zero() || h == 0.0 {
            return x.to_vec();
        }
        match self.kind {
            ProxKind::Euclidean => {
                if let Some(deltas) = self.sparse_euclidean_step(x, v, h) {
                    let mut y = x.to_vec();
                    for (j, val) in deltas {
                        y[j] = val;
                    }
                    y
                } else {
                    let mut z = x.to_vec();
                    for (j, vj) in v.iter() {
                        z[j] -= h * vj;
                    }
                    project_euclidean(&self.set, z)
                }
            }
            ProxKind::Entropy => {
                let mut logw: Vec<f64> = x.iter().map(|xi| xi.ln()).collect();
                for (j, vj) in v.iter() {
                    logw[j] -= h * vj;
                }
                let top = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut y: Vec<f64> = logw.iter().map(|l| (l - top).exp()).collect();
                let total: f64 = y.iter().sum();
                y.iter_mut().for_each(|yi| *yi /= total);
                y
            }
        }
    }

    /// For separable Euclidean sets, the coordinates the mirror step changes, as
    /// `(j, new value)` pairs restricted to the support of `v`. `None` otherwise.
    pub fn sparse_euclidean_step(&self, x: &[f64], v: &SparseVector, h: f64) -> Option<Vec<(usize, f64)>> {
        if self.kind != ProxKind::Euclidean {
            return None;
        }
        match &self.set {
            SetDescriptor::Box { lo, hi } => Some(
                v.iter()
                    .map(|(j, vj)| (j, (x[j] - h * vj).clamp(lo[j], hi[j])))
                    .collect(),
            ),
            SetDescriptor::NonnegativeOrthant { .. } => {
                Some(v.iter().map(|(j, vj)| (j, (x[j] - h * vj).max(0.0))).collect())
            }
            _ => None,
        }
    }

    /// `Rbar^2`: the user value when given, otherwise the computed bound.
    pub fn radius_bound(&self) -> Result<f64> {
        match self.rbar2 {
            Some(r) => Ok(r),
            None => self.computed_radius_bound(),
        }
    }

    /// Box: `sum (hi-lo)^2 / 2`; ball: `2 r^2`; Euclidean simplex: `1`;
    /// entropy simplex: `ln n`, which bounds `V_{x1}(y)` from the uniform start only.
    pub fn computed_radius_bound(&self) -> Result<f64> {
        match (&self.set, self.kind) {
            (SetDescriptor::Box { lo, hi }, _) => Ok(0.5 * lo.iter().zip(hi).map(|(l, h)| (h - l) * (h - l)).sum::<f64>()),
            (SetDescriptor::Ball { radius, .. }, _) => Ok(2.0 * radius * radius),
            (SetDescriptor::Simplex { n }, ProxKind::Entropy) => Ok((*n as f64).ln()),
            (SetDescriptor::Simplex { .. }, ProxKind::Euclidean) => Ok(1.0),
            (SetDescriptor::NonnegativeOrthant { .. }, _) => Err(Error::UnboundedSet),
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn xlogx(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

/// Euclidean projection onto `Q`.
pub fn project_euclidean(set: &SetDescriptor, mut z: Vec<f64>) -> Vec<f64> {
    match set {
        SetDescriptor::Box { lo, hi } => {
            for (j, zj) in z.iter_mut().enumerate() {
                *zj = zj.clamp(lo[j], hi[j]);
            }
            z
        }
        SetDescriptor::NonnegativeOrthant { .. } => {
            z.iter_mut().for_each(|v| *v = v.max(0.0));
            z
        }
        SetDescriptor::Ball { center, radius } => {
            let dist = sq_dist(&z, center).sqrt();
            if dist > *radius {
                let s = radius / dist;
                for (zj, cj) in z.iter_mut().zip(center) {
                    *zj = cj + (*zj - cj) * s;
                }
            }
            z
        }
        SetDescriptor::Simplex { .. } => project_simplex(z),
    }
}

/// Sort-based projection onto the probability simplex.
fn project_simplex(mut z: Vec<f64>) -> Vec<f64> {
    let mut sorted = z.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cum += u;
        let t = (cum - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        }
    }
    z.iter_mut().for_each(|v| *v = (*v - tau).max(0.0));
    z
}
