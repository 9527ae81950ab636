mod common;

use proptest::prelude::*;

use common::{lp_optimum, random_lps, vertex_enumeration};
use mirrorgate::{certify, dual_value, solve, DualNorm, Problem, ProblemSpec, ProxSetup, SetDescriptor, SolverConfig};

#[test]
fn reference_oracles_agree() {
    for (n, m) in [(2, 3), (3, 5), (4, 6)] {
        for p in random_lps(10, n, m, 2.min(n), 100 + n as u64) {
            let (a, b) = (lp_optimum(&p), vertex_enumeration(&p));
            assert!((a - b).abs() <= 1e-9, "simplex {a} vs vertices {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weak_duality(seed in 0u64..40, lambda in prop::collection::vec(0.0..3.0f64, 20),
                    raw in prop::collection::vec(0.0..1.0f64, 10), t in 0.0..1.0f64) {
        let p = &random_lps(1, 10, 20, 3, seed)[0];
        // pull a random box point toward the Slater center until it is feasible
        let mut x: Vec<f64> = raw.iter().map(|r| 0.5 + t * (r - 0.5)).collect();
        while p.eval_constraints_max(&x).0 > 0.0 {
            x.iter_mut().for_each(|v| *v = 0.5 + 0.5 * (*v - 0.5));
        }
        let phi = dual_value(p, &lambda).unwrap();
        prop_assert!(p.eval_objective(&x) - phi >= -1e-9);
    }
}

#[test]
fn sandwich_and_gap_lower_bound() {
    for p in random_lps(8, 10, 20, 3, 21) {
        let f_star = lp_optimum(&p);
        let setup = ProxSetup::euclidean(p.set().clone()).unwrap();
        let (mf, mg) = p.gradient_bounds(DualNorm::L2).unwrap();
        let r = solve(&p, &setup, &SolverConfig::new(0.05, mf, mg)).unwrap();
        let c = certify(&p, &r.trace, &r.steps).unwrap();
        assert!(c.phi_val <= f_star + 1e-9);
        assert!(f_star <= c.phi_val + c.gap + 1e-9 + (f_star - c.f_val).max(0.0));
        assert!(c.gap <= r.eps_f);
        // f(x) - phi >= -sum lambda_l g_l(x)+ for any x in Q
        let xbar = r.trace.xbar.as_ref().unwrap();
        let slack: f64 = (0..p.m()).map(|l| c.lambda[l] * p.eval_constraint(l, xbar).unwrap().max(0.0)).sum();
        assert!(c.gap >= -slack - 1e-9, "gap {} slack {slack}", c.gap);
        assert!((c.lambda.iter().sum::<f64>() - r.trace.n_nonproductive as f64 * r.steps.h_g / (r.steps.h_f * r.trace.n_productive as f64)).abs() < 1e-9);
    }
}

#[test]
fn dual_value_matches_grid_minimum() {
    // n = 2 problems: Lagrangian minimized over a fine grid of Q
    let sets = [
        SetDescriptor::Box { lo: vec![-1.0, 0.0], hi: vec![2.0, 1.5] },
        SetDescriptor::Ball { center: vec![0.5, -0.5], radius: 1.2 },
        SetDescriptor::Simplex { n: 2 },
    ];
    let lambdas = [[0.0, 0.0], [0.7, 0.0], [0.3, 1.9], [2.5, 0.4]];
    for set in sets {
        let p = Problem::build(ProblemSpec::affine(
            set.clone(),
            vec![1.0, -0.5],
            vec![0.3, -0.2],
            vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, -1.5), (1, 1, 0.5)],
        ))
        .unwrap();
        for lam in lambdas {
            let phi = dual_value(&p, &lam).unwrap();
            let steps = 2000;
            let mut best = f64::INFINITY;
            for a in 0..=steps {
                for b in 0..=steps {
                    let (u, v) = (a as f64 / steps as f64, b as f64 / steps as f64);
                    let x = match &set {
                        SetDescriptor::Box { lo, hi } => vec![lo[0] + u * (hi[0] - lo[0]), lo[1] + v * (hi[1] - lo[1])],
                        SetDescriptor::Ball { center, radius } => {
                            let (r, th) = (radius * u, v * std::f64::consts::TAU);
                            vec![center[0] + r * th.cos(), center[1] + r * th.sin()]
                        }
                        _ => vec![u, 1.0 - u],
                    };
                    let lag = p.eval_objective(&x)
                        + (0..2).map(|l| lam[l] * p.eval_constraint(l, &x).unwrap()).sum::<f64>();
                    best = best.min(lag);
                }
            }
            assert!(phi <= best + 1e-12, "{set:?} {lam:?}: {phi} > {best}");
            assert!(best - phi <= 1e-4, "{set:?} {lam:?}: {phi} vs {best}");
        }
    }
}
