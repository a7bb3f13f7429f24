//! Minimal sparse types for the two incidence matrices.
//!
//! Both matrices are binary and pattern-only, so we store index lists instead
//! of a general sparse format. `Incidence` is row-major (one row per path,
//! holding the link ids on that path). `UnitColumns` exploits the structure of
//! the OD-path matrix: every column has exactly one nonzero, so a column-to-row
//! map is the whole matrix.

use nalgebra::DMatrix;

/// Binary sparse matrix stored as per-row column-index lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    ncols: usize,
    rows: Vec<Vec<u32>>,
}

impl Incidence {
    /// Builds from row index lists. Panics if an index is out of range.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<u32>>) -> Self {
        for row in &rows {
            for &j in row {
                assert!((j as usize) < ncols, "column index {j} out of range {ncols}");
            }
        }
        Self { ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// y = M x, with `x` of length `ncols`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&j| x[j as usize]).sum())
            .collect()
    }

    /// y = M' x, with `x` of length `nrows`.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows.len());
        let mut out = vec![0.0; self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            let xi = x[i];
            if xi != 0.0 {
                for &j in row {
                    out[j as usize] += xi;
                }
            }
        }
        out
    }

    /// Accumulates M' x into `out` (length `ncols`) without zeroing it first.
    pub fn tr_mul_acc(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.rows.len());
        assert_eq!(out.len(), self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            let xi = x[i];
            if xi != 0.0 {
                for &j in row {
                    out[j as usize] += xi;
                }
            }
        }
    }

    /// Row subset in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Incidence {
        Incidence {
            ncols: self.ncols,
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows.len(), self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                m[(i, j as usize)] += 1.0;
            }
        }
        m
    }
}

/// Binary matrix whose every column is a unit vector: column `j` has its single
/// one in row `row_of_col[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitColumns {
    nrows: usize,
    row_of_col: Vec<u32>,
}

impl UnitColumns {
    pub fn new(nrows: usize, row_of_col: Vec<u32>) -> Self {
        for &r in &row_of_col {
            assert!((r as usize) < nrows, "row index {r} out of range {nrows}");
        }
        Self { nrows, row_of_col }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.row_of_col.len()
    }

    pub fn row_of_col(&self, j: usize) -> usize {
        self.row_of_col[j] as usize
    }

    /// y = A x: accumulate each column's entry into its row.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.row_of_col.len());
        let mut out = vec![0.0; self.nrows];
        for (j, &r) in self.row_of_col.iter().enumerate() {
            out[r as usize] += x[j];
        }
        out
    }

    /// y = A' x: gather each column's row entry.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows);
        self.row_of_col.iter().map(|&r| x[r as usize]).collect()
    }

    /// Column subset in the given order; row dimension is preserved.
    pub fn select_cols(&self, idx: &[usize]) -> UnitColumns {
        UnitColumns {
            nrows: self.nrows,
            row_of_col: idx.iter().map(|&j| self.row_of_col[j]).collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.row_of_col.len());
        for (j, &r) in self.row_of_col.iter().enumerate() {
            m[(r as usize, j)] = 1.0;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_products_match_dense() {
        let b = Incidence::from_rows(3, vec![vec![0], vec![1, 2]]);
        assert_eq!(b.mul_vec(&[1.0, 2.0, 3.0]), vec![1.0, 5.0]);
        assert_eq!(b.tr_mul_vec(&[10.0, 1.0]), vec![10.0, 1.0, 1.0]);
        let d = b.to_dense();
        assert_eq!(d[(0, 0)], 1.0);
        assert_eq!(d[(1, 1)], 1.0);
        assert_eq!(d[(1, 2)], 1.0);
        assert_eq!(b.nnz(), 3);
    }

    #[test]
    fn unit_columns_products() {
        // two ODs, three paths: paths 0,1 -> od 0, path 2 -> od 1
        let a = UnitColumns::new(2, vec![0, 0, 1]);
        assert_eq!(a.mul_vec(&[1.0, 2.0, 5.0]), vec![3.0, 5.0]);
        assert_eq!(a.tr_mul_vec(&[7.0, 9.0]), vec![7.0, 7.0, 9.0]);
        let sel = a.select_cols(&[2, 0]);
        assert_eq!(sel.mul_vec(&[1.0, 1.0]), vec![1.0, 1.0]);
    }

    #[test]
    fn select_rows_keeps_order() {
        let b = Incidence::from_rows(4, vec![vec![0], vec![1], vec![2, 3]]);
        let sub = b.select_rows(&[2, 0]);
        assert_eq!(sub.nrows(), 2);
        assert_eq!(sub.row(0), &[2, 3]);
        assert_eq!(sub.row(1), &[0]);
    }
}
