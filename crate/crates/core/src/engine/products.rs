use super::matrix::SparseMatrix;
use super::segtree::{scan_max, MaxTree};
use crate::error::{Error, Result};

/// Maps a row product `A_l^T x` to the constraint value `g_l`.
pub trait RowMap {
    fn row_value(&self, row: usize, product: f64) -> f64;
}

/// `g_l = A_l^T x`; useful when only the products themselves matter.
#[derive(Debug, Clone, Copy, Default)]
pub struct RawProducts;

impl RowMap for RawProducts {
    #[inline]
    fn row_value(&self, _row: usize, product: f64) -> f64 {
        product
    }
}

/// Operation counts accumulated by incremental updates and max queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostCounter {
    pub coords_changed: u64,
    pub column_entries: u64,
    pub tree_visits: u64,
}

impl std::ops::AddAssign for CostCounter {
    fn add_assign(&mut self, o: Self) {
        self.coords_changed += o.coords_changed;
        self.column_entries += o.column_entries;
        self.tree_visits += o.tree_visits;
    }
}

#[derive(Debug, Clone)]
enum Tracker {
    Tree(MaxTree),
    /// Dense baseline: values kept in a flat array, max found by full scan.
    Scan(Vec<f64>),
}

pub const DEFAULT_REFRESH_INTERVAL: u64 = 1_000_000;

/// Current iterate, its row products `y = A x`, and a max tracker over `g_l(y_l)`.
#[derive(Debug, Clone)]
pub struct ProductState {
    x: Vec<f64>,
    y: Vec<f64>,
    tracker: Tracker,
    cost: CostCounter,
    refresh_every: Option<u64>,
    since_refresh: u64,
    refreshes: u64,
}

impl ProductState {
    pub fn new<M: RowMap>(a: &SparseMatrix, map: &M, x: Vec<f64>) -> Result<Self> {
        let y = Self::check_and_multiply(a, &x)?;
        let vals: Vec<f64> = y.iter().enumerate().map(|(l, &v)| map.row_value(l, v)).collect();
        Ok(ProductState {
            x,
            y,
            tracker: Tracker::Tree(MaxTree::new(&vals)),
            cost: CostCounter::default(),
            refresh_every: Some(DEFAULT_REFRESH_INTERVAL),
            since_refresh: 0,
            refreshes: 0,
        })
    }

    /// Same state, but the max is recomputed by a linear scan on every query.
    pub fn new_scan<M: RowMap>(a: &SparseMatrix, map: &M, x: Vec<f64>) -> Result<Self> {
        let mut s = Self::new(a, map, x)?;
        if let Tracker::Tree(t) = &s.tracker {
            s.tracker = Tracker::Scan(t.values());
        }
        Ok(s)
    }

    fn check_and_multiply(a: &SparseMatrix, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "iterate has length {}, matrix has {} columns",
                x.len(),
                a.cols()
            )));
        }
        Ok(a.mul_vec(x))
    }

    /// `None` disables periodic recomputation.
    pub fn set_refresh_interval(&mut self, every: Option<u64>) {
        self.refresh_every = every.filter(|&k| k > 0);
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn products(&self) -> &[f64] {
        &self.y
    }

    pub fn cost(&self) -> CostCounter {
        self.cost
    }

    pub fn refreshes(&self) -> u64 {
        self.refreshes
    }

    pub fn is_scan(&self) -> bool {
        matches!(self.tracker, Tracker::Scan(_))
    }

    /// Current constraint values `g_l`.
    pub fn row_values(&self) -> Vec<f64> {
        match &self.tracker {
            Tracker::Tree(t) => t.values(),
            Tracker::Scan(v) => v.clone(),
        }
    }

    /// Sets `x_j = value` for each `(j, value)`, propagating through column `j`.
    /// Returns the cost of this call.
    pub fn apply_delta<M: RowMap>(
        &mut self,
        a: &SparseMatrix,
        map: &M,
        deltas: &[(usize, f64)],
    ) -> Result<CostCounter> {
        let n = self.x.len();
        if let Some(&(j, _)) = deltas.iter().find(|(j, _)| *j >= n) {
            return Err(Error::CoordOutOfRange { coord: j, n });
        }
        let mut cost = CostCounter::default();
        for &(j, new) in deltas {
            let old = self.x[j];
            if new == old {
                continue;
            }
            self.x[j] = new;
            cost.coords_changed += 1;
            let diff = new - old;
            let (rows, vals) = a.col(j);
            for (&l, &alj) in rows.iter().zip(vals) {
                self.y[l] += alj * diff;
                cost.column_entries += 1;
                let g = map.row_value(l, self.y[l]);
                match &mut self.tracker {
                    Tracker::Tree(t) => cost.tree_visits += t.set(l, g) as u64,
                    Tracker::Scan(v) => v[l] = g,
                }
            }
        }
        self.cost += cost;
        self.since_refresh += cost.coords_changed;
        if let Some(k) = self.refresh_every {
            if self.since_refresh >= k {
                self.recompute_full(a, map);
            }
        }
        Ok(cost)
    }

    /// Replaces the whole iterate; always recomputes from scratch.
    pub fn reset<M: RowMap>(&mut self, a: &SparseMatrix, map: &M, x: Vec<f64>) -> Result<()> {
        self.y = Self::check_and_multiply(a, &x)?;
        self.x = x;
        self.rebuild_tracker(map);
        Ok(())
    }

    /// Root of the tracker: (max_l g_l, smallest maximizing l).
    pub fn max_query(&mut self) -> Option<(f64, usize)> {
        match &self.tracker {
            Tracker::Tree(t) => t.max(),
            Tracker::Scan(v) => {
                self.cost.tree_visits += v.len() as u64;
                scan_max(v)
            }
        }
    }

    /// Discards incremental state and rebuilds `y` and the tracker from `x`.
    pub fn recompute_full<M: RowMap>(&mut self, a: &SparseMatrix, map: &M) {
        self.y = a.mul_vec(&self.x);
        self.rebuild_tracker(map);
        self.since_refresh = 0;
        self.refreshes += 1;
    }

    fn rebuild_tracker<M: RowMap>(&mut self, map: &M) {
        let vals: Vec<f64> = self.y.iter().enumerate().map(|(l, &v)| map.row_value(l, v)).collect();
        self.tracker = match self.tracker {
            Tracker::Tree(_) => Tracker::Tree(MaxTree::new(&vals)),
            Tracker::Scan(_) => Tracker::Scan(vals),
        };
    }
}
