//! Incremental sparse machinery: dual CSR/CSC storage, maintained row
//! products under sparse iterate changes, and a segment-tree max tracker.

mod matrix;
pub mod mm;
mod products;
mod segtree;

pub use matrix::SparseMatrix;
pub use products::{CostCounter, ProductState, RawProducts, RowMap, DEFAULT_REFRESH_INTERVAL};
pub use segtree::{scan_max, MaxTree};
