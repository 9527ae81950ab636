use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// Constraint matrix stored twice: CSR for row access, CSC for column walks.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    row_col: Vec<usize>,
    row_val: Vec<f64>,
    col_ptr: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    max_row_nnz: usize,
    max_col_nnz: usize,
}

impl SparseMatrix {
    /// Builds from 0-based `(row, col, value)` triplets. Duplicates are summed;
    /// entries that sum to zero are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= rows {
                return Err(Error::IndexOutOfRange { index: r, dim: rows });
            }
            if c >= cols {
                return Err(Error::IndexOutOfRange { index: c, dim: cols });
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(sorted.len());
        for (r, c, v) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| t.2 != 0.0);

        let nnz = merged.len();
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_ptr = vec![0usize; cols + 1];
        for &(r, c, _) in &merged {
            row_ptr[r + 1] += 1;
            col_ptr[c + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        for j in 0..cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let row_col = merged.iter().map(|t| t.1).collect();
        let row_val = merged.iter().map(|t| t.2).collect();

        // merged is row-major, so filling columns in order keeps row indices sorted
        let mut col_row = vec![0usize; nnz];
        let mut col_val = vec![0.0; nnz];
        let mut next = col_ptr.clone();
        for &(r, c, v) in &merged {
            col_row[next[c]] = r;
            col_val[next[c]] = v;
            next[c] += 1;
        }

        let max_row_nnz = (0..rows).map(|i| row_ptr[i + 1] - row_ptr[i]).max().unwrap_or(0);
        let max_col_nnz = (0..cols).map(|j| col_ptr[j + 1] - col_ptr[j]).max().unwrap_or(0);
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            row_col,
            row_val,
            col_ptr,
            col_row,
            col_val,
            max_row_nnz,
            max_col_nnz,
        })
    }

    pub fn from_dense(dense: &[Vec<f64>], cols: usize) -> Result<Self> {
        let mut t = Vec::new();
        for (i, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            t.extend(row.iter().enumerate().map(|(j, v)| (i, j, *v)));
        }
        Self::from_triplets(dense.len(), cols, &t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_val.len()
    }

    /// Largest number of nonzeros in a row (s_n).
    pub fn max_row_nnz(&self) -> usize {
        self.max_row_nnz
    }

    /// Largest number of nonzeros in a column (s_m).
    pub fn max_col_nnz(&self) -> usize {
        self.max_col_nnz
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.row_col[r.clone()], &self.row_val[r])
    }

    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.col_row[r.clone()], &self.col_val[r])
    }

    pub fn row_vector(&self, i: usize) -> SparseVector {
        let (idx, val) = self.row(i);
        SparseVector::from_sorted(self.cols, idx.to_vec(), val.to_vec())
    }

    pub fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (idx, val) = self.row(i);
        idx.iter().zip(val).map(|(j, v)| v * x[*j]).sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| self.row_dot(i, x)).collect()
    }

    /// A^T y.
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|j| {
                let (idx, val) = self.col(j);
                idx.iter().zip(val).map(|(i, v)| v * y[*i]).sum()
            })
            .collect()
    }

    /// Row-major triplets, 0-based.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.rows)
            .flat_map(|i| {
                let (idx, val) = self.row(i);
                idx.iter().zip(val).map(move |(j, v)| (i, *j, *v))
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }

    /// Dense matrix as seen through the CSC arrays only.
    pub fn to_dense_by_columns(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for j in 0..self.cols {
            let (idx, val) = self.col(j);
            for (&i, &v) in idx.iter().zip(val) {
                out[i][j] = v;
            }
        }
        out
    }
}
