//! Operation-count measurements for the incremental engine. Tree-node visits
//! and column entries are counted instead of timed, so the per-iteration law
//! `visits <= t * s_m * (1 + ceil(log2 m))` can be checked exactly.

use std::time::Instant;

use rand::seq::index::sample;

use crate::batch::{map_indexed, Execution};
use crate::engine::{ProductState, RawProducts, SparseMatrix};
use crate::error::Result;
use crate::generate::{random_box_lp, random_triplets, InstanceParams, Sparsity};
use crate::problem::Problem;
use crate::prox::ProxSetup;
use crate::randomized::Rng;
use crate::solver::{solve_seeded, BudgetMode, OracleMode, SolverConfig, TrackerKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workload {
    /// Random `t`-coordinate deltas applied directly to the engine.
    Engine { t: usize },
    /// Full solver iterations on a generated instance.
    Solver { oracle: OracleMode },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSpec {
    pub m: usize,
    pub n: usize,
    pub s_m: usize,
    pub iterations: u64,
    pub workload: Workload,
    pub dense_baseline: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPoint {
    pub m: usize,
    pub n: usize,
    /// Observed max nonzeros per row / column.
    pub s_n: usize,
    pub s_m: usize,
    pub iterations: u64,
    pub tree_visits: u64,
    pub column_entries: u64,
    pub coords_changed: u64,
    /// `ceil(log2 m)`.
    pub height: usize,
    /// Largest tree-visit count of a single iteration (engine workload only).
    pub max_iter_visits: Option<u64>,
    /// Iterations whose own visit count exceeded `changed * s_m * (1 + height)`.
    pub iter_violations: Option<u64>,
    pub dense_baseline: bool,
    pub wall_secs: f64,
}

impl BenchPoint {
    pub fn visits_per_iter(&self) -> f64 {
        self.tree_visits as f64 / self.iterations as f64
    }

    pub fn entries_per_iter(&self) -> f64 {
        self.column_entries as f64 / self.iterations as f64
    }

    /// Mean nodes visited per refreshed row: the effective tree depth.
    pub fn visits_per_entry(&self) -> f64 {
        if self.column_entries == 0 {
            0.0
        } else {
            self.tree_visits as f64 / self.column_entries as f64
        }
    }

    /// Aggregate form of the per-iteration law; the scan baseline must cost
    /// exactly `m` per iteration instead.
    pub fn satisfies_cost_law(&self) -> bool {
        if self.dense_baseline {
            self.tree_visits == self.iterations * self.m as u64
        } else {
            self.iter_violations.unwrap_or(0) == 0
                && self.tree_visits <= self.coords_changed * (self.s_m * (1 + self.height)) as u64
        }
    }

    pub const CSV_HEADER: &'static str =
        "m,n,s_n,s_m,iterations,mean_tree_visits,max_iter_visits,mean_column_entries,mean_coords_changed,visits_per_entry,height,dense_baseline,wall_secs";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.n,
            self.s_n,
            self.s_m,
            self.iterations,
            crate::fmt_f64(self.visits_per_iter()),
            self.max_iter_visits.map(|v| v.to_string()).unwrap_or_default(),
            crate::fmt_f64(self.entries_per_iter()),
            crate::fmt_f64(self.coords_changed as f64 / self.iterations as f64),
            crate::fmt_f64(self.visits_per_entry()),
            self.height,
            self.dense_baseline,
            crate::fmt_f64(self.wall_secs)
        )
    }
}

fn height(m: usize) -> usize {
    m.max(1).next_power_of_two().trailing_zeros() as usize
}

pub fn run_point(spec: &BenchSpec) -> Result<BenchPoint> {
    let mut rng = Rng::new(spec.seed);
    match spec.workload {
        Workload::Engine { t } => {
            let trip = random_triplets(&mut rng, spec.m, spec.n, Sparsity::PerColumn(spec.s_m), 0.1, 1.0)?;
            let a = SparseMatrix::from_triplets(spec.m, spec.n, &trip)?;
            let x0: Vec<f64> = (0..spec.n).map(|_| rand::Rng::random_range(&mut rng, 0.0..1.0)).collect();
            let mut state = if spec.dense_baseline {
                ProductState::new_scan(&a, &RawProducts, x0)?
            } else {
                ProductState::new(&a, &RawProducts, x0)?
            };
            state.set_refresh_interval(None);
            let start = Instant::now();
            let mut deltas = Vec::with_capacity(t);
            let mut max_iter_visits = 0u64;
            let mut iter_violations = 0u64;
            let levels = (a.max_col_nnz() * (1 + height(spec.m))) as u64;
            for _ in 0..spec.iterations {
                deltas.clear();
                for j in sample(&mut rng, spec.n, t.min(spec.n)) {
                    // always a real change: shift by at least 0.01
                    let v = state.x()[j] + 0.01 + rand::Rng::random_range(&mut rng, 0.0..1.0);
                    deltas.push((j, v));
                }
                let before = state.cost().tree_visits;
                let step = state.apply_delta(&a, &RawProducts, &deltas)?;
                std::hint::black_box(state.max_query());
                let visits = state.cost().tree_visits - before;
                max_iter_visits = max_iter_visits.max(visits);
                if !spec.dense_baseline && visits > step.coords_changed * levels {
                    iter_violations += 1;
                }
            }
            let wall_secs = start.elapsed().as_secs_f64();
            let cost = state.cost();
            Ok(BenchPoint {
                m: spec.m,
                n: spec.n,
                s_n: a.max_row_nnz(),
                s_m: a.max_col_nnz(),
                iterations: spec.iterations,
                tree_visits: cost.tree_visits,
                column_entries: cost.column_entries,
                coords_changed: cost.coords_changed,
                height: height(spec.m),
                max_iter_visits: Some(max_iter_visits),
                iter_violations: Some(iter_violations),
                dense_baseline: spec.dense_baseline,
                wall_secs,
            })
        }
        Workload::Solver { oracle } => {
            let mut params = InstanceParams::box_lp(spec.n, spec.m, Sparsity::PerColumn(spec.s_m));
            params.c_nnz = Some(spec.s_m.max(1));
            let p = Problem::build(random_box_lp(&mut rng, &params)?)?;
            let setup = ProxSetup::euclidean(p.set().clone())?;
            let (mf, mg) = crate::solver::default_bounds(&p, &setup, oracle, false)?;
            let mut cfg = SolverConfig::new(0.05, mf, mg);
            cfg.budget = BudgetMode::Manual(spec.iterations);
            cfg.oracle = oracle;
            cfg.seed = spec.seed;
            cfg.refresh_interval = None;
            cfg.tracker = if spec.dense_baseline { TrackerKind::Scan } else { TrackerKind::SegmentTree };
            let start = Instant::now();
            let report = solve_seeded(&p, &setup, &cfg, 0)?;
            let wall_secs = start.elapsed().as_secs_f64();
            let cost = report.cost;
            // scan mode also counts the m-visit scans; report only those for the baseline
            Ok(BenchPoint {
                m: spec.m,
                n: spec.n,
                s_n: p.matrix().max_row_nnz(),
                s_m: p.matrix().max_col_nnz(),
                iterations: spec.iterations,
                tree_visits: cost.tree_visits,
                column_entries: cost.column_entries,
                coords_changed: cost.coords_changed,
                height: height(spec.m),
                max_iter_visits: None,
                iter_violations: None,
                dense_baseline: spec.dense_baseline,
                wall_secs,
            })
        }
    }
}

/// Runs every grid point, in parallel when `exec` allows.
pub fn sweep(specs: &[BenchSpec], exec: Execution) -> Result<Vec<BenchPoint>> {
    map_indexed(specs.len() as u64, exec, |i| run_point(&specs[i as usize]))
        .into_iter()
        .collect()
}

/// Violations of the cost law and of the "one extra tree level per doubling
/// of m" rule among points that share everything except `m`.
pub fn check_cost_law(points: &[BenchPoint]) -> Vec<String> {
    let mut problems = Vec::new();
    for p in points {
        if !p.satisfies_cost_law() {
            problems.push(format!(
                "m={} s_m={}: {} visits for {} changed coordinates exceeds the bound",
                p.m, p.s_m, p.tree_visits, p.coords_changed
            ));
        }
    }
    for a in points.iter().filter(|p| !p.dense_baseline) {
        for b in points.iter().filter(|p| !p.dense_baseline) {
            if b.m == 2 * a.m && b.s_m == a.s_m && b.n == a.n {
                let growth = b.visits_per_entry() - a.visits_per_entry();
                if growth > 1.0 + 1e-12 {
                    problems.push(format!(
                        "s_m={}: depth grew by {growth} from m={} to m={}",
                        a.s_m, a.m, b.m
                    ));
                }
            }
        }
    }
    problems
}
