//! Envelope (profile) Cholesky factorization under a reverse Cuthill–McKee
//! ordering. For the banded-ish matrices of 2D P1 meshes this is simple, cache
//! friendly and a factorization failure certifies indefiniteness.

use std::collections::VecDeque;

use crate::assembly::SymmetricSparseMatrix;

#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// First stored column of each row of `L` (in the permuted numbering).
    first: Vec<usize>,
    /// Offset of `L[i][first[i]]` in `data`; row `i` runs through the diagonal.
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `S` with the given ordering. Returns the index (in the
    /// original numbering) of the first non-positive pivot on failure.
    pub fn factor(s: &SymmetricSparseMatrix, perm: &[usize]) -> Result<Self, usize> {
        let n = s.dim();
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (r, c, _) in s.entries() {
            let (i, j) = (inv[r], inv[c]);
            let (row, col) = if i >= j { (i, j) } else { (j, i) };
            first[row] = first[row].min(col);
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        for i in 0..n {
            start.push(total);
            total += i - first[i] + 1;
        }
        start.push(total);
        let mut data = vec![0.0; total];
        for (r, c, v) in s.entries() {
            let (i, j) = (inv[r], inv[c]);
            let (row, col) = if i >= j { (i, j) } else { (j, i) };
            data[start[row] + col - first[row]] = v;
        }

        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let (ri, rj) = (start[i] + k0 - fi, start[j] + k0 - fj);
                let len = j - k0;
                let dot: f64 = data[ri..ri + len].iter().zip(&data[rj..rj + len]).map(|(a, b)| a * b).sum();
                let diag_j = data[start[j] + j - fj];
                let idx = start[i] + j - fi;
                data[idx] = (data[idx] - dot) / diag_j;
            }
            let row = &data[start[i]..start[i] + i - fi];
            let sq: f64 = row.iter().map(|v| v * v).sum();
            let idx = start[i] + i - fi;
            let pivot = data[idx] - sq;
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(perm[i]);
            }
            data[idx] = pivot.sqrt();
        }
        Ok(Self { perm: perm.to_vec(), first, start, data })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of `L`.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `S x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * xi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = y[new];
        }
    }
}

/// Reverse Cuthill–McKee ordering of a symmetric adjacency structure, each
/// component started from a pseudo-peripheral vertex. Returns `perm[new] = old`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut scratch = vec![usize::MAX; n];

    while order.len() < n {
        let seed = (0..n).filter(|&v| !visited[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        let root = pseudo_peripheral(adj, &degree, seed, &mut scratch);
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            next.dedup();
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// BFS levels from `root`; returns (eccentricity, last level).
fn level_structure(adj: &[Vec<usize>], root: usize, dist: &mut [usize]) -> (usize, Vec<usize>) {
    let mut touched = vec![root];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut ecc = 0;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                ecc = ecc.max(dist[w]);
                touched.push(w);
                queue.push_back(w);
            }
        }
    }
    let last: Vec<usize> = touched.iter().copied().filter(|&v| dist[v] == ecc).collect();
    for v in touched {
        dist[v] = usize::MAX;
    }
    (ecc, last)
}

fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], seed: usize, dist: &mut [usize]) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = level_structure(adj, root, dist);
    loop {
        let Some(&cand) = last.iter().min_by_key(|&&v| (degree[v], v)) else {
            return root;
        };
        let (e, l) = level_structure(adj, cand, dist);
        if e <= ecc {
            return root;
        }
        root = cand;
        ecc = e;
        last = l;
    }
}
