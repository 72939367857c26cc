use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetric matrix stored as its upper triangle in compressed rows.
///
/// Entries are kept with `row <= col`, sorted by column within each row; exact
/// zeros are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymmetricSparseMatrix {
    /// Builds the matrix from `(row, col, value)` triplets. Either triangle may
    /// be supplied; duplicates are summed in input order, which keeps the
    /// floating point result independent of any hashing.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> =
            triplets.into_iter().map(|(r, c, v)| if r <= c { (r, c, v) } else { (c, r, v) }).collect();
        if let Some(&(r, c, _)) = t.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::Invalid(format!("entry ({r}, {c}) outside a {dim}x{dim} matrix")));
        }
        if t.iter().any(|(_, _, v)| !v.is_finite()) {
            return Err(Error::Invalid("non-finite matrix entry".into()));
        }
        t.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals = Vec::with_capacity(t.len());
        let mut i = 0;
        while i < t.len() {
            let (r, c, mut v) = t[i];
            i += 1;
            while i < t.len() && t[i].0 == r && t[i].1 == c {
                v += t[i].2;
                i += 1;
            }
            if v != 0.0 {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self { dim, row_ptr, cols, vals })
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let n = m.nrows();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a - b).abs() > 1e-14 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Self::from_triplets(n, (0..n).flat_map(|i| (i..n).map(move |j| (i, j, m[(i, j)]))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored upper-triangle entries.
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Stored entries as `(row, col, value)` with `row <= col`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim)
            .flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k])))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for r in 0..self.dim {
            let xr = x[r];
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let (c, v) = (self.cols[k], self.vals[k]);
                acc += v * x[c];
                if c != r {
                    y[c] += v * xr;
                }
            }
            y[r] += acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `uᵀ S v`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut s = 0.0;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let (c, a) = (self.cols[k], self.vals[k]);
                s += a * u[r] * v[c];
                if c != r {
                    s += a * u[c] * v[r];
                }
            }
        }
        s
    }

    /// `Σ coef_k S_k` over the union of the sparsity patterns.
    pub fn linear_combination(terms: &[(f64, &SymmetricSparseMatrix)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Invalid("empty linear combination".into()));
        };
        let dim = first.dim;
        if let Some((_, m)) = terms.iter().find(|(_, m)| m.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: m.dim });
        }
        Self::from_triplets(
            dim,
            terms
                .iter()
                .filter(|(c, _)| *c != 0.0)
                .flat_map(|(c, m)| m.entries().map(move |(r, col, v)| (r, col, c * v))),
        )
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            d[(r, c)] = v;
            d[(c, r)] = v;
        }
        d
    }

    /// Largest absolute row sum, a cheap upper bound on the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.dim];
        for (r, c, v) in self.entries() {
            rows[r] += v.abs();
            if r != c {
                rows[c] += v.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Adjacency lists of the full symmetric pattern, without the diagonal.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.dim];
        for (r, c, _) in self.entries() {
            if r != c {
                adj[r].push(c);
                adj[c].push(r);
            }
        }
        adj
    }

    /// Coordinate text export: `NROWS NNZ` followed by `row col value` lines
    /// of the lower triangle.
    pub fn to_coordinate_text(&self) -> String {
        let mut lower: Vec<(usize, usize, f64)> = self.entries().map(|(r, c, v)| (c, r, v)).collect();
        lower.sort_by_key(|&(r, c, _)| (r, c));
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.dim, lower.len());
        for (r, c, v) in lower {
            let _ = writeln!(out, "{r} {c} {v:.16e}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = SymmetricSparseMatrix::from_triplets(3, [(0, 1, 1.0), (1, 0, 2.0), (2, 2, 1.0), (2, 2, -1.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(2, 2), 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let m = SymmetricSparseMatrix::from_triplets(3, [(0, 0, 2.0), (0, 2, -1.0), (1, 1, 3.0), (1, 2, 0.5)]).unwrap();
        let x = [1.0, -2.0, 0.25];
        let dense = m.to_dense() * nalgebra::DVector::from_column_slice(&x);
        let y = m.mul_vec(&x);
        for i in 0..3 {
            assert!((y[i] - dense[i]).abs() < 1e-15);
        }
        assert!((m.bilinear(&x, &x) - nalgebra::DVector::from_column_slice(&x).dot(&dense)).abs() < 1e-15);
    }

    #[test]
    fn coordinate_export_is_lower_triangle() {
        let m = SymmetricSparseMatrix::from_triplets(2, [(0, 1, 4.0), (0, 0, 1.0)]).unwrap();
        let text = m.to_coordinate_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "2 2");
        assert!(lines[1].starts_with("0 0 "));
        assert!(lines[2].starts_with("1 0 "));
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        assert!(SymmetricSparseMatrix::from_triplets(2, [(0, 2, 1.0)]).is_err());
    }
}
