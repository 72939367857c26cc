//! Lowest eigenpairs of `(A − αB) ψ = λ M ψ`.
//!
//! Small problems go through a dense Cholesky-reduced symmetric solve. Larger
//! ones use shift-invert block Krylov iteration with a shift that is
//! certified to lie below the spectrum: `K − σM` admits a Cholesky
//! factorization exactly when `σ < λ₁`, so a failed factorization simply moves
//! the shift further down.

mod envelope;
mod krylov;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::assembly::{AssembledForms, NodalFunction, SymmetricSparseMatrix};
use crate::error::{Error, Result};

pub use envelope::{reverse_cuthill_mckee, EnvelopeCholesky};

/// Relative gap below which neighbouring eigenvalues are treated as one cluster.
pub const CLUSTER_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Shift {
    /// `−(1.5α² + 10)`, lowered further if it is not below the spectrum.
    #[default]
    Auto,
    Fixed(f64),
}

impl Serialize for Shift {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shift::Auto => s.serialize_str("auto"),
            Shift::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Shift {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Value(f64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Value(v) => Ok(Shift::Fixed(v)),
            Raw::Name(s) if s == "auto" => Ok(Shift::Auto),
            Raw::Name(s) => Err(serde::de::Error::custom(format!("shift must be a number or \"auto\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub count: usize,
    pub tolerance: f64,
    pub shift: Shift,
    /// Problems with at most this many unknowns are solved densely.
    pub dense_threshold: usize,
    /// Budget of shift-invert applications for the iterative path.
    pub max_iterations: usize,
    /// Seed of the random Krylov start block.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { count: 1, tolerance: 1e-8, shift: Shift::Auto, dense_threshold: 500, max_iterations: 5000, seed: 0x5eed }
    }
}

impl SolverOptions {
    pub fn with_count(count: usize) -> Self {
        Self { count, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Invalid("eigenpair count must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if let Shift::Fixed(s) = self.shift {
            if !s.is_finite() {
                return Err(Error::Invalid("shift must be finite".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda: f64,
    pub psi: NodalFunction,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Dense,
    ShiftInvertKrylov,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub alpha: f64,
    /// Ascending, repeated according to multiplicity.
    pub pairs: Vec<EigenPair>,
    /// Index ranges of eigenvalues within [`CLUSTER_GAP`] of each other.
    pub clusters: Vec<std::ops::Range<usize>>,
    pub mesh_tag: String,
    pub options: SolverOptions,
    pub method: SolveMethod,
    /// Shift actually used by the iterative path.
    pub shift: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumRecord<'a> {
    alpha: f64,
    pairs: Vec<PairRecord>,
    mesh_tag: &'a str,
    options: &'a SolverOptions,
    method: SolveMethod,
    clusters: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct PairRecord {
    lambda: f64,
    residual: f64,
}

impl Spectrum {
    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let rec = SpectrumRecord {
            alpha: self.alpha,
            pairs: self.pairs.iter().map(|p| PairRecord { lambda: p.lambda, residual: p.residual }).collect(),
            mesh_tag: &self.mesh_tag,
            options: &self.options,
            method: self.method,
            clusters: self.clusters.iter().map(|r| [r.start, r.end]).collect(),
        };
        Ok(serde_json::to_string_pretty(&rec)?)
    }

    /// Mesh-indexed eigenvector file: one value per line.
    pub fn eigenvector_text(&self, index: usize) -> Option<String> {
        let p = self.pairs.get(index)?;
        let mut out = String::with_capacity(p.psi.len() * 24);
        for v in p.psi.values() {
            out.push_str(&format!("{v:.16e}\n"));
        }
        Some(out)
    }
}

/// Negative eigenvalues counted with multiplicity and by distinct cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NegativeCount {
    pub with_multiplicity: usize,
    pub distinct: usize,
}

pub fn solve(forms: &AssembledForms, alpha: f64, opts: &SolverOptions) -> Result<Spectrum> {
    opts.validate()?;
    if !alpha.is_finite() {
        return Err(Error::Invalid(format!("alpha must be finite, got {alpha}")));
    }
    let n = forms.dim();
    if opts.count > n {
        return Err(Error::Invalid(format!("requested {} eigenpairs from a problem of size {n}", opts.count)));
    }
    let k = forms.operator(alpha)?;
    let use_dense = n <= opts.dense_threshold || n < 4 * (opts.count + krylov::BLOCK);
    let (raw, method, shift) = if use_dense {
        (dense_pairs(&k, &forms.m, opts.count)?, SolveMethod::Dense, None)
    } else {
        let (pairs, shift) = krylov_pairs(&k, &forms.m, alpha, opts)?;
        (pairs, SolveMethod::ShiftInvertKrylov, Some(shift))
    };

    let mut pairs = Vec::with_capacity(raw.len());
    for (lambda, mut x, residual) in raw {
        normalize_sign(&mut x);
        pairs.push(EigenPair { lambda, psi: NodalFunction::from(x), residual });
    }
    let worst = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    if worst > opts.tolerance {
        return Err(Error::NoConvergence {
            iterations: 0,
            worst,
            residuals: pairs.iter().map(|p| p.residual).collect(),
        });
    }
    let clusters = find_clusters(&pairs.iter().map(|p| p.lambda).collect::<Vec<_>>());
    let mesh_tag = forms.mesh().map(|m| m.tag().label()).unwrap_or_else(|| "matrices".into());
    Ok(Spectrum { alpha, pairs, clusters, mesh_tag, options: opts.clone(), method, shift })
}

fn dense_pairs(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    count: usize,
) -> Result<Vec<(f64, Vec<f64>, f64)>> {
    let n = k.dim();
    let chol = Cholesky::new(m.to_dense())
        .ok_or_else(|| Error::AssemblyIntegrity("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    // C = L⁻¹ K L⁻ᵀ
    let mut c = k.to_dense();
    l.solve_lower_triangular_mut(&mut c);
    let mut c = c.transpose();
    l.solve_lower_triangular_mut(&mut c);
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    let mut out = Vec::with_capacity(count);
    for &col in order.iter().take(count) {
        let mut y = DMatrix::from_column_slice(n, 1, eig.eigenvectors.column(col).as_slice());
        lt.solve_upper_triangular_mut(&mut y);
        let x: Vec<f64> = y.iter().copied().collect();
        let lambda = eig.eigenvalues[col];
        let res = krylov::relative_residual(k, m, lambda, &x);
        out.push((lambda, x, res));
    }
    Ok(out)
}

fn krylov_pairs(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    alpha: f64,
    opts: &SolverOptions,
) -> Result<(Vec<(f64, Vec<f64>, f64)>, f64)> {
    let perm = reverse_cuthill_mckee(&k.adjacency());
    if let Err(row) = EnvelopeCholesky::factor(m, &perm) {
        return Err(Error::AssemblyIntegrity(format!("mass matrix is not positive definite (pivot at row {row})")));
    }
    let mut shift = match opts.shift {
        Shift::Auto => -(1.5 * alpha * alpha + 10.0),
        Shift::Fixed(s) => s,
    };
    // The shift must sit below λ₁; a failed factorization proves it does not.
    let scale = k.norm_inf() / m.diagonal().iter().copied().fold(f64::INFINITY, f64::min);
    let factor = loop {
        let shifted = SymmetricSparseMatrix::linear_combination(&[(1.0, k), (-shift, m)])?;
        match EnvelopeCholesky::factor(&shifted, &perm) {
            Ok(f) => break f,
            Err(_) => {
                if shift.abs() > 1e3 * scale.max(1.0) {
                    return Err(Error::AssemblyIntegrity("no shift below the spectrum was found".into()));
                }
                shift = 2.0 * shift.min(-1.0);
            }
        }
    };
    let problem = krylov::KrylovProblem { k, m, shifted: &factor, shift };
    let result = krylov::solve(&problem, opts.count, opts.tolerance, opts.max_iterations, opts.seed)?;
    Ok((result.pairs, shift))
}

/// Flips `x` so that its entry of largest magnitude (first one on ties) is positive.
pub fn normalize_sign(x: &mut [f64]) {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x.get(best).is_some_and(|v| *v < 0.0) {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

fn find_clusters(lambdas: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=lambdas.len() {
        let split = i == lambdas.len() || {
            let (a, b) = (lambdas[i - 1], lambdas[i]);
            (b - a).abs() > CLUSTER_GAP * a.abs().max(b.abs()).max(1.0)
        };
        if split {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Counts strictly negative eigenvalues. The last returned eigenvalue must be
/// non-negative, otherwise the count could be incomplete. Eigenvalues within
/// the solver tolerance of zero (relative to the largest returned magnitude)
/// are treated as zero.
pub fn negative_count(spectrum: &Spectrum) -> Result<NegativeCount> {
    let Some(last) = spectrum.pairs.last() else {
        return Err(Error::CountTooSmall { count: 0 });
    };
    let scale = spectrum.pairs.iter().map(|p| p.lambda.abs()).fold(1.0, f64::max);
    let zero = spectrum.options.tolerance * scale;
    let negative = |l: f64| l < -zero;
    if negative(last.lambda) {
        return Err(Error::CountTooSmall { count: spectrum.pairs.len() });
    }
    let with_multiplicity = spectrum.pairs.iter().filter(|p| negative(p.lambda)).count();
    let distinct = spectrum.clusters.iter().filter(|r| negative(spectrum.pairs[r.start].lambda)).count();
    Ok(NegativeCount { with_multiplicity, distinct })
}

/// Modified Gram–Schmidt (with one reorthogonalization pass) in the inner
/// product defined by `metric`.
pub fn gram_schmidt(vectors: &[NodalFunction], metric: &SymmetricSparseMatrix) -> Result<Vec<NodalFunction>> {
    let n = metric.dim();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    let mut metric_out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let mut x = v.values().to_vec();
        let norm0 = metric.bilinear(&x, &x).sqrt();
        for _ in 0..2 {
            for (q, mq) in out.iter().zip(&metric_out) {
                let c: f64 = x.iter().zip(mq).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
            }
        }
        let mx = metric.mul_vec(&x);
        let norm: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>().sqrt();
        let pivot = if norm0 > 0.0 { norm / norm0 } else { 0.0 };
        if !(pivot >= 1e-12) {
            return Err(Error::Dependent { index, pivot });
        }
        x.iter_mut().for_each(|v| *v /= norm);
        metric_out.push(mx.into_iter().map(|v| v / norm).collect());
        out.push(x);
    }
    Ok(out.into_iter().map(NodalFunction::from).collect())
}
