mod common;

use proptest::prelude::*;

use common::random_lps;
use mirrorgate::{Problem, ProblemSpec, ScalarFn, SetDescriptor};

fn mixed_problem(seed: u64) -> Problem {
    let base = random_lps(1, 6, 9, 3, seed).pop().unwrap();
    let sigma = (0..9).map(|l| [ScalarFn::Linear, ScalarFn::Abs, ScalarFn::Square][l % 3].clone()).collect();
    Problem::build(ProblemSpec {
        n: 6,
        m: 9,
        set: base.set().clone(),
        c: base.objective().c.to_dense(),
        objective_offset: 0.5,
        objective_fn: ScalarFn::Square,
        b: base.offsets().to_vec(),
        sigma,
        triplets: base.matrix().triplets(),
    })
    .unwrap()
}

fn unit(v: &[f64]) -> Vec<f64> {
    v.iter().map(|t| t.clamp(0.0, 1.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn affine_constraints_are_convex(seed in 0u64..50, x in prop::collection::vec(0.0..1.0f64, 10),
                                     y in prop::collection::vec(0.0..1.0f64, 10), theta in 0.0..=1.0f64) {
        let p = random_lps(1, 10, 12, 4, seed).pop().unwrap();
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| theta * a + (1.0 - theta) * b).collect();
        let g = |v: &[f64]| p.eval_constraints_max(v).0;
        prop_assert!(g(&z) <= theta * g(&x) + (1.0 - theta) * g(&y) + 1e-12);
    }

    #[test]
    fn nonlinear_rows_are_convex(seed in 0u64..20, x in prop::collection::vec(0.0..1.0f64, 6),
                                 y in prop::collection::vec(0.0..1.0f64, 6), theta in 0.0..=1.0f64) {
        let p = mixed_problem(seed);
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| theta * a + (1.0 - theta) * b).collect();
        for l in 0..p.m() {
            let g = |v: &[f64]| p.eval_constraint(l, v).unwrap();
            prop_assert!(g(&z) <= theta * g(&x) + (1.0 - theta) * g(&y) + 1e-12);
        }
        let f = |v: &[f64]| p.eval_objective(v);
        prop_assert!(f(&z) <= theta * f(&x) + (1.0 - theta) * f(&y) + 1e-12);
    }

    #[test]
    fn subgradient_inequality(seed in 0u64..20, x in prop::collection::vec(-0.5..1.5f64, 6),
                              y in prop::collection::vec(-0.5..1.5f64, 6)) {
        let p = mixed_problem(seed);
        let (x, y) = (unit(&x), unit(&y));
        for l in 0..p.m() {
            let s = p.subgradient_constraint(&x, l).unwrap();
            let d: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
            let lhs = p.eval_constraint(l, &y).unwrap();
            let rhs = p.eval_constraint(l, &x).unwrap() + s.dot(&d);
            prop_assert!(lhs >= rhs - 1e-9, "row {l}: {lhs} < {rhs}");
        }
        let s = p.subgradient_objective(&x);
        let d: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(p.eval_objective(&y) >= p.eval_objective(&x) + s.dot(&d) - 1e-9);
    }

    #[test]
    fn max_matches_rowwise_evaluation(seed in 0u64..50, x in prop::collection::vec(0.0..1.0f64, 10)) {
        let p = random_lps(1, 10, 15, 3, seed).pop().unwrap();
        let y = p.matrix().mul_vec(&x);
        let (g, l) = p.constraints_max_from_products(&y);
        let rows: Vec<f64> = (0..p.m()).map(|i| p.constraint_value(i, y[i])).collect();
        let best = rows.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(g.to_bits(), best.to_bits());
        prop_assert_eq!(l, rows.iter().position(|&v| v == best).unwrap());
        prop_assert_eq!(p.eval_constraints_max(&x), (g, l));
    }
}

#[test]
fn square_row_gradient_matches_finite_difference() {
    let p = mixed_problem(3);
    let x = vec![0.3, 0.7, 0.1, 0.9, 0.5, 0.4];
    let step = 1e-6;
    for l in (2..p.m()).step_by(3) {
        let s = p.subgradient_constraint(&x, l).unwrap().to_dense();
        for j in 0..p.n() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            let fd = (p.eval_constraint(l, &xp).unwrap() - p.eval_constraint(l, &xm).unwrap()) / (2.0 * step);
            assert!((fd - s[j]).abs() < 1e-6, "row {l} coord {j}: {fd} vs {}", s[j]);
        }
    }
}

#[test]
fn objective_gradient_matches_finite_difference() {
    let p = mixed_problem(4);
    let x = vec![0.2, 0.1, 0.8, 0.6, 0.5, 0.3];
    let s = p.subgradient_objective(&x).to_dense();
    for j in 0..p.n() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += 1e-6;
        xm[j] -= 1e-6;
        let fd = (p.eval_objective(&xp) - p.eval_objective(&xm)) / 2e-6;
        assert!((fd - s[j]).abs() < 1e-6);
    }
}

#[test]
fn slater_point_is_strictly_feasible() {
    for p in random_lps(10, 10, 20, 3, 1) {
        let g = p.eval_constraints_max(&[0.5; 10]).0;
        assert!(g <= -0.05 + 1e-12, "{g}");
        assert!(matches!(p.set(), SetDescriptor::Box { .. }));
    }
}
