//! Block shift-invert Krylov iteration with full reorthogonalization and
//! thick restarts.
//!
//! The operator `T = (K − σM)⁻¹ M` is self-adjoint in the `M` inner product
//! and maps the smallest eigenvalues `λ` of `K x = λ M x` to its largest
//! eigenvalues `1 / (λ − σ)`. A block start (rather than a single vector) lets
//! exactly repeated eigenvalues, such as the paired angular modes of a
//! symmetric disk mesh, be found without relying on rounding noise.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::envelope::EnvelopeCholesky;
use crate::assembly::SymmetricSparseMatrix;
use crate::error::{Error, Result};

pub(super) const BLOCK: usize = 3;

pub(super) struct KrylovProblem<'a> {
    pub k: &'a SymmetricSparseMatrix,
    pub m: &'a SymmetricSparseMatrix,
    pub shifted: &'a EnvelopeCholesky,
    pub shift: f64,
}

pub(super) struct KrylovResult {
    /// Ascending eigenvalues with `M`-orthonormal vectors and residuals.
    pub pairs: Vec<(f64, Vec<f64>, f64)>,
    #[allow(dead_code)]
    pub applications: usize,
}

/// `‖Kx − λMx‖₂ / (‖Kx‖₂ + max(|λ|, 1) ‖Mx‖₂)`, scale free and well defined
/// at `λ = 0`.
pub(super) fn relative_residual(k: &SymmetricSparseMatrix, m: &SymmetricSparseMatrix, lambda: f64, x: &[f64]) -> f64 {
    let kx = k.mul_vec(x);
    let mx = m.mul_vec(x);
    let r: f64 = kx.iter().zip(&mx).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    let nk = kx.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nm = mx.iter().map(|v| v * v).sum::<f64>().sqrt();
    r / (nk + lambda.abs().max(1.0) * nm)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// `M`-orthonormal basis with cached `M v`.
struct Basis<'a> {
    m: &'a SymmetricSparseMatrix,
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
}

impl Basis<'_> {
    /// Orthogonalizes `x` against the basis twice and appends it if it keeps
    /// a meaningful fraction of its norm.
    fn push(&mut self, mut x: Vec<f64>) -> bool {
        let norm0 = dot(&x, &self.m.mul_vec(&x)).sqrt();
        if !(norm0 > 0.0) {
            return false;
        }
        for _ in 0..2 {
            for (v, mv) in self.v.iter().zip(&self.mv) {
                let c = dot(&x, mv);
                axpy(-c, v, &mut x);
            }
        }
        let mx = self.m.mul_vec(&x);
        let norm = dot(&x, &mx).sqrt();
        if !(norm > 1e-10 * norm0) {
            return false;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        self.mv.push(mx.into_iter().map(|v| v / norm).collect());
        self.v.push(x);
        true
    }

    fn len(&self) -> usize {
        self.v.len()
    }
}

pub(super) fn solve(
    p: &KrylovProblem<'_>,
    count: usize,
    tolerance: f64,
    max_applications: usize,
    seed: u64,
) -> Result<KrylovResult> {
    let n = p.k.dim();
    let max_basis = (count * 4).max(count + 30).min(n);
    let keep = (count + 2 * BLOCK).min(max_basis.saturating_sub(2 * BLOCK)).max(count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_vector = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect() };

    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = p.m.mul_vec(x);
        p.shifted.solve_in_place(&mut y);
        y
    };

    let mut basis = Basis { m: p.m, v: Vec::new(), mv: Vec::new() };
    // Images T v for every basis vector that has been expanded.
    let mut images: Vec<Vec<f64>> = Vec::new();
    while basis.len() < BLOCK.min(n) {
        let x = random_vector(&mut rng);
        basis.push(x);
    }

    let mut applications = 0usize;
    let mut last_residuals = vec![f64::INFINITY; count];
    loop {
        // Expand until the basis is full.
        while basis.len() < max_basis {
            let frontier = images.len();
            if frontier >= basis.len() {
                let x = random_vector(&mut rng);
                if !basis.push(x) {
                    break;
                }
                continue;
            }
            let end = (frontier + BLOCK).min(basis.len());
            for j in frontier..end {
                images.push(apply(&basis.v[j]));
                applications += 1;
            }
            for j in frontier..end {
                if basis.len() >= max_basis {
                    break;
                }
                let w = images[j].clone();
                if !basis.push(w) {
                    // Invariant subspace: continue with fresh random direction.
                    let x = random_vector(&mut rng);
                    basis.push(x);
                }
            }
        }
        // Every vector in the projection needs its image.
        while images.len() < basis.len() {
            let j = images.len();
            images.push(apply(&basis.v[j]));
            applications += 1;
        }

        let dim = basis.len();
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (dot(&basis.mv[i], &images[j]) + dot(&basis.mv[j], &images[i]));
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let combine = |vecs: &[Vec<f64>], col: usize| -> Vec<f64> {
            let mut x = vec![0.0; n];
            for (i, v) in vecs.iter().enumerate() {
                axpy(eig.eigenvectors[(i, col)], v, &mut x);
            }
            x
        };

        let wanted = count.min(dim);
        let mut pairs = Vec::with_capacity(wanted);
        for &col in order.iter().take(wanted) {
            let theta = eig.eigenvalues[col];
            let x = combine(&basis.v, col);
            let lambda = p.shift + 1.0 / theta;
            let res = relative_residual(p.k, p.m, lambda, &x);
            pairs.push((lambda, x, res));
        }
        last_residuals = pairs.iter().map(|t| t.2).collect();
        let converged =
            theta_positive(&eig.eigenvalues, &order, wanted) && last_residuals.iter().all(|&r| r <= tolerance);
        if converged || dim == n && images.len() == n {
            if !converged {
                return Err(no_convergence(applications, last_residuals));
            }
            return Ok(KrylovResult { pairs, applications });
        }
        if applications >= max_applications {
            return Err(no_convergence(applications, last_residuals));
        }

        // Thick restart: keep the leading Ritz vectors and their images. The
        // images of the newest block, orthogonalized against the whole old
        // basis, are the residual directions that continue the Krylov space.
        let kept = keep.min(dim);
        let mut fresh: Vec<Vec<f64>> = images[dim.saturating_sub(BLOCK)..dim].to_vec();
        for x in fresh.iter_mut() {
            for _ in 0..2 {
                for (v, mv) in basis.v.iter().zip(&basis.mv) {
                    let c = dot(x, mv);
                    axpy(-c, v, x);
                }
            }
        }
        let mut new_v = Vec::with_capacity(kept);
        let mut new_w = Vec::with_capacity(kept);
        for &col in order.iter().take(kept) {
            new_v.push(combine(&basis.v, col));
            new_w.push(combine(&images, col));
        }
        basis = Basis { m: p.m, v: Vec::new(), mv: Vec::new() };
        for v in new_v {
            let mv = p.m.mul_vec(&v);
            basis.mv.push(mv);
            basis.v.push(v);
        }
        images = new_w;
        for x in fresh {
            basis.push(x);
        }
    }
}

fn theta_positive(values: &nalgebra::DVector<f64>, order: &[usize], wanted: usize) -> bool {
    order.iter().take(wanted).all(|&c| values[c] > 0.0)
}

fn no_convergence(iterations: usize, residuals: Vec<f64>) -> Error {
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Error::NoConvergence { iterations, worst, residuals }
}
