//! The constrained problem `min f(c^T x)  s.t.  max_l sigma_l(A_l^T x) - b_l <= 0,  x in Q`
//! and its exact first-order oracle.

use std::fmt;
use std::sync::Arc;

use crate::engine::{RowMap, SparseMatrix};
use crate::error::{Error, Result};
use crate::set::SetDescriptor;
use crate::sparse::SparseVector;

/// User-supplied convex scalar function: value plus one subgradient.
pub trait ScalarConvex: Send + Sync + fmt::Debug {
    fn value(&self, t: f64) -> f64;
    /// Any element of the subdifferential at `t`, chosen deterministically.
    fn derivative(&self, t: f64) -> f64;
    /// Lipschitz constant on `[lo, hi]` (bounds may be infinite).
    fn lipschitz(&self, lo: f64, hi: f64) -> f64;
}

/// Convex scalar function applied to a row product.
#[derive(Clone)]
pub enum ScalarFn {
    /// `t`
    Linear,
    /// `|t|`, with derivative `sign(t)` and `0` at the kink.
    Abs,
    /// `t^2`
    Square,
    Custom(Arc<dyn ScalarConvex>),
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Custom(c) => write!(f, "Custom({c:?})"),
            other => f.write_str(other.tag().unwrap_or("?")),
        }
    }
}

impl ScalarFn {
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Linear => t,
            ScalarFn::Abs => t.abs(),
            ScalarFn::Square => t * t,
            ScalarFn::Custom(c) => c.value(t),
        }
    }

    #[inline]
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Linear => 1.0,
            ScalarFn::Abs => {
                if t > 0.0 {
                    1.0
                } else if t < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            ScalarFn::Square => 2.0 * t,
            ScalarFn::Custom(c) => c.derivative(t),
        }
    }

    pub fn lipschitz(&self, lo: f64, hi: f64) -> f64 {
        match self {
            ScalarFn::Linear | ScalarFn::Abs => 1.0,
            ScalarFn::Square => 2.0 * lo.abs().max(hi.abs()),
            ScalarFn::Custom(c) => c.lipschitz(lo, hi),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, ScalarFn::Linear)
    }

    /// Name used in problem files; `None` for callbacks.
    pub fn tag(&self) -> Option<&'static str> {
        match self {
            ScalarFn::Linear => Some("linear"),
            ScalarFn::Abs => Some("abs"),
            ScalarFn::Square => Some("square"),
            ScalarFn::Custom(_) => None,
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "linear" | "affine" => Some(ScalarFn::Linear),
            "abs" => Some(ScalarFn::Abs),
            "square" => Some(ScalarFn::Square),
            _ => None,
        }
    }
}

/// `f(c^T x) + offset`.
#[derive(Debug, Clone)]
pub struct Objective {
    pub c: SparseVector,
    pub offset: f64,
    pub func: ScalarFn,
}

/// Unvalidated problem description, as read from a file or built in code.
/// Indices are 0-based.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub n: usize,
    pub m: usize,
    pub set: SetDescriptor,
    pub c: Vec<f64>,
    pub objective_offset: f64,
    pub objective_fn: ScalarFn,
    pub b: Vec<f64>,
    /// One per row; empty means all rows linear.
    pub sigma: Vec<ScalarFn>,
    pub triplets: Vec<(usize, usize, f64)>,
}

impl ProblemSpec {
    /// Affine problem with all constraint rows linear.
    pub fn affine(set: SetDescriptor, c: Vec<f64>, b: Vec<f64>, triplets: Vec<(usize, usize, f64)>) -> Self {
        ProblemSpec {
            n: set.dim(),
            m: b.len(),
            set,
            c,
            objective_offset: 0.0,
            objective_fn: ScalarFn::Linear,
            b,
            sigma: Vec::new(),
            triplets,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    objective: Objective,
    sigma: Vec<ScalarFn>,
    b: Vec<f64>,
    matrix: SparseMatrix,
    set: SetDescriptor,
    empty_rows: Vec<usize>,
}

impl Problem {
    pub fn build(spec: ProblemSpec) -> Result<Self> {
        let ProblemSpec {
            n,
            m,
            set,
            c,
            objective_offset,
            objective_fn,
            b,
            sigma,
            triplets,
        } = spec;
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch(format!("need n >= 1 and m >= 1, got n={n}, m={m}")));
        }
        if set.dim() != n {
            return Err(Error::DimensionMismatch(format!("set has dimension {}, problem has n={n}", set.dim())));
        }
        set.validate()?;
        if c.len() != n {
            return Err(Error::DimensionMismatch(format!("objective vector has length {}, expected {n}", c.len())));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch(format!("offset vector has length {}, expected {m}", b.len())));
        }
        let sigma = if sigma.is_empty() { vec![ScalarFn::Linear; m] } else { sigma };
        if sigma.len() != m {
            return Err(Error::DimensionMismatch(format!("{} row functions for {m} rows", sigma.len())));
        }
        for &(r, col, _) in &triplets {
            if r >= m {
                return Err(Error::DimensionMismatch(format!("entry references row {} but m={m}", r + 1)));
            }
            if col >= n {
                return Err(Error::DimensionMismatch(format!("entry references column {} but n={n}", col + 1)));
            }
        }
        if c.iter().chain(&b).any(|v| !v.is_finite()) || !objective_offset.is_finite() {
            return Err(Error::DimensionMismatch("non-finite data in c or b".into()));
        }
        let matrix = SparseMatrix::from_triplets(m, n, &triplets)?;
        let empty_rows = (0..m).filter(|&l| matrix.row(l).0.is_empty()).collect();
        Ok(Problem {
            objective: Objective {
                c: SparseVector::from_dense(&c),
                offset: objective_offset,
                func: objective_fn,
            },
            sigma,
            b,
            matrix,
            set,
            empty_rows,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn set(&self) -> &SetDescriptor {
        &self.set
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn offsets(&self) -> &[f64] {
        &self.b
    }

    pub fn row_fn(&self, l: usize) -> &ScalarFn {
        &self.sigma[l]
    }

    /// Rows with no stored entries; each contributes the constant `sigma_l(0) - b_l`.
    pub fn empty_rows(&self) -> &[usize] {
        &self.empty_rows
    }

    /// Affine objective and all rows linear.
    pub fn is_affine(&self) -> bool {
        self.objective.func.is_linear() && self.sigma.iter().all(ScalarFn::is_linear)
    }

    pub fn eval_objective(&self, x: &[f64]) -> f64 {
        self.objective.func.value(self.objective.c.dot(x)) + self.objective.offset
    }

    #[inline]
    pub fn constraint_value(&self, l: usize, product: f64) -> f64 {
        self.sigma[l].value(product) - self.b[l]
    }

    /// `g_l(x)` for a single row.
    pub fn eval_constraint(&self, l: usize, x: &[f64]) -> Result<f64> {
        self.check_row(l)?;
        Ok(self.constraint_value(l, self.matrix.row_dot(l, x)))
    }

    /// `(max_l g_l(x), smallest maximizing l)`, computed from scratch.
    pub fn eval_constraints_max(&self, x: &[f64]) -> (f64, usize) {
        let y = self.matrix.mul_vec(x);
        self.constraints_max_from_products(&y)
    }

    /// Same as [`Problem::eval_constraints_max`] but from precomputed `y = A x`.
    pub fn constraints_max_from_products(&self, y: &[f64]) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (l, &yl) in y.iter().enumerate() {
            let g = self.constraint_value(l, yl);
            if g > best.0 || l == 0 {
                best = (g, l);
            }
        }
        best
    }

    /// `f'(c^T x) c`.
    pub fn subgradient_objective(&self, x: &[f64]) -> SparseVector {
        let obj = &self.objective;
        let scale = if obj.func.is_linear() { 1.0 } else { obj.func.derivative(obj.c.dot(x)) };
        obj.c.scaled(scale)
    }

    /// `sigma_l'(A_l^T x) A_l`.
    pub fn subgradient_constraint(&self, x: &[f64], l: usize) -> Result<SparseVector> {
        self.check_row(l)?;
        Ok(self.subgradient_constraint_at(l, self.matrix.row_dot(l, x)))
    }

    /// Constraint subgradient given the maintained product `A_l^T x`.
    pub fn subgradient_constraint_at(&self, l: usize, product: f64) -> SparseVector {
        let scale = self.sigma[l].derivative(product);
        self.matrix.row_vector(l).scaled(scale)
    }

    fn check_row(&self, l: usize) -> Result<()> {
        if l >= self.m() {
            return Err(Error::RowOutOfRange { row: l, m: self.m() });
        }
        Ok(())
    }

    /// Lipschitz-type bounds `(M_f, M_g)` on subgradient norms over `Q`, measured in
    /// the given dual norm. Rows and objective use `Lip(sigma on range) * ||a||_*`.
    pub fn gradient_bounds(&self, norm: DualNorm) -> Result<(f64, f64)> {
        let bound = |func: &ScalarFn, a: &SparseVector| -> f64 {
            if a.is_zero() {
                return 0.0;
            }
            let (lo, hi) = self.set.linear_range(a);
            func.lipschitz(lo, hi) * norm.apply(a)
        };
        let mf = bound(&self.objective.func, &self.objective.c);
        let mg = (0..self.m())
            .map(|l| bound(&self.sigma[l], &self.matrix.row_vector(l)))
            .fold(0.0, f64::max);
        if !mf.is_finite() || !mg.is_finite() {
            return Err(Error::InvalidConfig(
                "gradient bounds are infinite on this set; pass M_f and M_g explicitly".into(),
            ));
        }
        if mg == 0.0 {
            return Err(Error::InvalidConfig("all constraint rows are empty; M_g would be zero".into()));
        }
        // a constant objective never moves the iterate, any positive M_f works
        Ok((if mf > 0.0 { mf } else { 1.0 }, mg))
    }
}

impl RowMap for Problem {
    #[inline]
    fn row_value(&self, row: usize, product: f64) -> f64 {
        self.constraint_value(row, product)
    }
}

/// Norm used to measure subgradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualNorm {
    L1,
    L2,
    LInf,
}

impl DualNorm {
    pub fn apply(self, v: &SparseVector) -> f64 {
        match self {
            DualNorm::L1 => v.norm1(),
            DualNorm::L2 => v.norm2_sq().sqrt(),
            DualNorm::LInf => v.norm_inf(),
        }
    }
}
