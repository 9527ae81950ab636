//! Reference oracles shared by the integration tests. Nothing here calls the
//! solver: optima come from an external simplex code or from brute force.
#![allow(dead_code)]

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection};
use mirrorgate::generate::{random_box_lp, InstanceParams, Sparsity};
use mirrorgate::{Problem, ProblemSpec, Rng, SetDescriptor};

/// min x1 + x2 over [0,2]^2 s.t. 1 - x1 <= 0. Optimum 1 at (1, 0).
pub fn two_var() -> Problem {
    Problem::build(ProblemSpec::affine(
        SetDescriptor::Box { lo: vec![0.0; 2], hi: vec![2.0; 2] },
        vec![1.0, 1.0],
        vec![-1.0],
        vec![(0, 0, -1.0)],
    ))
    .unwrap()
}

pub fn random_lps(count: usize, n: usize, m: usize, s_n: usize, seed: u64) -> Vec<Problem> {
    let mut rng = Rng::new(seed);
    (0..count)
        .map(|_| Problem::build(random_box_lp(&mut rng, &InstanceParams::box_lp(n, m, Sparsity::PerRow(s_n))).unwrap()).unwrap())
        .collect()
}

fn box_bounds(p: &Problem) -> (Vec<f64>, Vec<f64>) {
    match p.set() {
        SetDescriptor::Box { lo, hi } => (lo.clone(), hi.clone()),
        other => panic!("box LP expected, got {other:?}"),
    }
}

fn objective_dense(p: &Problem) -> Vec<f64> {
    assert!(p.objective().func.is_linear());
    p.objective().c.to_dense()
}

/// Optimal value of an affine box LP by the simplex method.
pub fn lp_optimum(p: &Problem) -> f64 {
    assert!(p.is_affine());
    let (lo, hi) = box_bounds(p);
    let c = objective_dense(p);
    let mut lp = minilp::Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..p.n()).map(|j| lp.add_var(c[j], (lo[j], hi[j]))).collect();
    for l in 0..p.m() {
        let (idx, vals) = p.matrix().row(l);
        let mut e = LinearExpr::empty();
        for (&j, &v) in idx.iter().zip(vals) {
            e.add(vars[j], v);
        }
        lp.add_constraint(e, ComparisonOp::Le, p.offsets()[l]);
    }
    lp.solve().expect("reference LP is feasible and bounded").objective() + p.objective().offset
}

/// Optimal value by enumerating every basis of `n` active inequalities.
/// Exponential; only for small `n` and `m`.
pub fn vertex_enumeration(p: &Problem) -> f64 {
    let n = p.n();
    let (lo, hi) = box_bounds(p);
    let a = p.matrix().to_dense();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e.clone(), hi[j]));
        e[j] = -1.0;
        rows.push((e, -lo[j]));
    }
    for (row, &b) in a.iter().zip(p.offsets()) {
        rows.push((row.clone(), b));
    }
    let c = objective_dense(p);
    let mut best = f64::INFINITY;
    let mut pick = Vec::with_capacity(n);
    enumerate(&rows, n, 0, &mut pick, &mut |basis| {
        let Some(x) = solve_square(basis.iter().map(|&i| rows[i].clone()).collect()) else { return };
        if rows.iter().all(|(g, h)| dot(g, &x) <= h + 1e-9) {
            best = best.min(dot(&c, &x));
        }
    });
    best + p.objective().offset
}

fn enumerate(rows: &[(Vec<f64>, f64)], k: usize, start: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..rows.len() {
        pick.push(i);
        enumerate(rows, k, i + 1, pick, f);
        pick.pop();
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(mut sys: Vec<(Vec<f64>, f64)>) -> Option<Vec<f64>> {
    let n = sys.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| sys[a].0[col].abs().total_cmp(&sys[b].0[col].abs()))?;
        if sys[piv].0[col].abs() < 1e-10 {
            return None;
        }
        sys.swap(col, piv);
        for r in col + 1..n {
            let factor = sys[r].0[col] / sys[col].0[col];
            if factor != 0.0 {
                for k in col..n {
                    let v = sys[col].0[k];
                    sys[r].0[k] -= factor * v;
                }
                let rhs = sys[col].1;
                sys[r].1 -= factor * rhs;
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| sys[r].0[k] * x[k]).sum();
        x[r] = (sys[r].1 - s) / sys[r].0[r];
    }
    Some(x)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
