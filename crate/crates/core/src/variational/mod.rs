//! Exponential test functions and the upper bounds built from them.
//!
//! A probe is `u_d(x) = c·e^{α x·d}` normalized in `L²(Ω)`. Its energy
//! `a(u_d, u_d) = α² − α ∫_∂Ω e^{2αx·d} / ∫_Ω e^{2αx·d}` is at most `−α²`
//! because the flux `∫_∂Ω e^{2αx·d} ν·d` equals `2α ∫_Ω e^{2αx·d}`. Deflating
//! the probe against known eigenfunctions gives an admissible function for
//! the next min–max level and hence an upper bound on the next eigenvalue.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{
    apply_form, exponential_volume_scaled, integrate_exponential, AssembledForms, ExpIntegrals, NodalFunction,
};
use crate::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point2};

/// Tolerance used to decide which vertices attain the maximum of `x·d`.
pub const CONTACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DirectionProbe {
    pub d: Point2,
    pub alpha: f64,
    /// `ln c`, kept in log form because `c` underflows for large `α`.
    pub log_c: f64,
    pub u: NodalFunction,
    /// Integrals of `e^{2α x·d}`.
    pub integrals: ExpIntegrals,
    mesh: Arc<Mesh>,
}

impl DirectionProbe {
    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    /// `c²`, which may underflow to zero for large `α`; prefer [`Self::log_c`].
    pub fn c_squared(&self) -> f64 {
        (2.0 * self.log_c).exp()
    }
}

fn check_unit(d: Point2) -> Result<()> {
    if !d.is_finite() || (d.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!("direction ({}, {}) is not a unit vector", d.x, d.y)));
    }
    Ok(())
}

pub fn make_probe(mesh: &Arc<Mesh>, alpha: f64, d: Point2) -> Result<DirectionProbe> {
    check_unit(d)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Invalid(format!("probe parameter alpha must be positive, got {alpha}")));
    }
    let integrals = integrate_exponential(mesh, d, 2.0 * alpha)?;
    let log_c = -0.5 * integrals.ln_volume();
    let values = mesh.vertices().iter().map(|p| (alpha * p.dot(d) + log_c).exp()).collect();
    Ok(DirectionProbe { d, alpha, log_c, u: NodalFunction::new(values)?, integrals, mesh: mesh.clone() })
}

/// Exact `a(u_d, u_d)` from the closed-form integrals (not the interpolant).
pub fn probe_energy(probe: &DirectionProbe) -> f64 {
    let a = probe.alpha;
    a * a - a * probe.integrals.boundary_scaled / probe.integrals.volume_scaled
}

/// `a_h(I u_d, I u_d)` of the nodal interpolant, for comparison with
/// [`probe_energy`].
pub fn probe_energy_interpolated(probe: &DirectionProbe, forms: &AssembledForms) -> Result<f64> {
    apply_form(forms, probe.alpha, &probe.u, &probe.u)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetCap {
    pub d: Point2,
    pub kappa: f64,
    /// Triangles whose closure lies in `{x·d ≥ κ}`, i.e. whose interior lies
    /// in the open cap.
    pub triangles: Vec<usize>,
    /// `max x·d` over the mesh.
    pub kappa_d: f64,
    /// Vertices attaining `kappa_d`.
    pub contact: Vec<usize>,
    /// Normals of the boundary edges meeting the contact set.
    pub contact_normals: Vec<Point2>,
}

impl LevelSetCap {
    pub fn area(&self, mesh: &Mesh) -> f64 {
        self.triangles.iter().map(|&t| mesh.triangle_area(t)).sum()
    }

    /// `min |d − ν|` over the contact normals; tends to zero under refinement
    /// on smooth boundaries.
    pub fn normal_defect(&self) -> f64 {
        self.contact_normals.iter().map(|n| (self.d - *n).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Level-set caps of `x·d` at each `κ`.
pub fn caps(mesh: &Mesh, d: Point2, kappas: &[f64]) -> Result<Vec<LevelSetCap>> {
    check_unit(d)?;
    let proj: Vec<f64> = mesh.vertices().iter().map(|p| p.dot(d)).collect();
    let kappa_d = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let contact: Vec<usize> = (0..proj.len()).filter(|&v| proj[v] >= kappa_d - CONTACT_TOL).collect();
    if contact.is_empty() {
        return Err(Error::MeshInvariant("no vertex attains the maximum of x·d".into()));
    }
    if let Some(&v) = contact.iter().find(|&&v| !mesh.is_boundary_vertex(v)) {
        return Err(Error::MeshInvariant(format!("contact vertex {v} is not on the boundary")));
    }
    let contact_normals = mesh
        .boundary_edges()
        .iter()
        .filter(|e| e.vertices.iter().any(|v| contact.binary_search(v).is_ok()))
        .map(|e| e.normal)
        .collect();

    let mut out = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        if kappa.is_nan() {
            return Err(Error::Invalid("cap level is NaN".into()));
        }
        let triangles = mesh
            .triangles()
            .iter()
            .enumerate()
            .filter(|(_, t)| t.iter().all(|&v| proj[v] >= kappa))
            .map(|(i, _)| i)
            .collect();
        out.push(LevelSetCap {
            d,
            kappa,
            triangles,
            kappa_d,
            contact: contact.clone(),
            contact_normals: Vec::clone(&contact_normals),
        });
    }
    Ok(out)
}

/// Largest `ε` from a halving search, refined by bisection, such that the caps
/// `{x·d > κ_d − ε}` and `{x·e > κ_e − ε}` share no triangle.
pub fn cap_disjointness(mesh: &Mesh, d: Point2, e: Point2) -> Result<f64> {
    check_unit(d)?;
    check_unit(e)?;
    if (d - e).norm() <= 1e-12 {
        return Err(Error::Precondition("cap disjointness needs two distinct directions".into()));
    }
    let cd = &caps(mesh, d, &[f64::INFINITY])?[0];
    let ce = &caps(mesh, e, &[f64::INFINITY])?[0];
    if let Some(v) = cd.contact.iter().find(|v| ce.contact.contains(v)) {
        return Err(Error::Precondition(format!(
            "contact sets share vertex {v}: on a polygon both directions peak at the same corner"
        )));
    }
    let disjoint = |eps: f64| -> Result<bool> {
        let a = &caps(mesh, d, &[cd.kappa_d - eps])?[0];
        let b = &caps(mesh, e, &[ce.kappa_d - eps])?[0];
        let set: std::collections::HashSet<usize> = a.triangles.iter().copied().collect();
        Ok(!b.triangles.iter().any(|t| set.contains(t)))
    };
    let width = |u: Point2| {
        let (lo, hi) = mesh
            .vertices()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.dot(u)), hi.max(p.dot(u))));
        hi - lo
    };
    let mut hi = width(d).max(width(e));
    let mut lo = hi;
    while !disjoint(lo)? {
        hi = lo;
        lo *= 0.5;
        if lo < 1e-14 * hi.max(1.0) {
            return Ok(0.0);
        }
    }
    if lo == hi {
        return Ok(lo);
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if disjoint(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `‖u_d‖²` over `Ω ∖ cap`, exactly.
pub fn mass_outside_cap(probe: &DirectionProbe, cap: &LevelSetCap) -> Result<f64> {
    if (probe.d - cap.d).norm() > 1e-12 {
        return Err(Error::Precondition("cap and probe use different directions".into()));
    }
    let mesh = &probe.mesh;
    let mut inside = vec![false; mesh.triangles().len()];
    cap.triangles.iter().for_each(|&t| inside[t] = true);
    let outside = (0..inside.len()).filter(|&t| !inside[t]);
    let s = 2.0 * probe.alpha;
    let scaled = exponential_volume_scaled(mesh, probe.d, s, probe.integrals.log_scale, outside)?;
    Ok(scaled / probe.integrals.volume_scaled)
}

/// `c² e^{2ακ} |cap|`, a lower bound for the probe mass inside the cap and
/// therefore at most one.
pub fn cap_mass_lower_bound(probe: &DirectionProbe, cap: &LevelSetCap) -> f64 {
    let ln = 2.0 * probe.log_c + 2.0 * probe.alpha * cap.kappa;
    let area = cap.area(&probe.mesh);
    if area == 0.0 {
        0.0
    } else {
        (ln + area.ln()).exp()
    }
}

/// `M`-orthonormal eigenfunctions with their eigenvalues.
#[derive(Debug, Clone, Default)]
pub struct DeflationBasis {
    pub vectors: Vec<NodalFunction>,
    pub eigenvalues: Vec<f64>,
}

impl DeflationBasis {
    pub fn new(vectors: Vec<NodalFunction>, eigenvalues: Vec<f64>, forms: &AssembledForms) -> Result<Self> {
        if vectors.len() != eigenvalues.len() {
            return Err(Error::DimensionMismatch { expected: vectors.len(), got: eigenvalues.len() });
        }
        for (i, a) in vectors.iter().enumerate() {
            if a.len() != forms.dim() {
                return Err(Error::DimensionMismatch { expected: forms.dim(), got: a.len() });
            }
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let g = forms.mass_inner(a.values(), b.values());
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > 1e-8 {
                    return Err(Error::Precondition(format!("basis Gram entry ({i}, {j}) is {g}, not {want}")));
                }
            }
        }
        Ok(Self { vectors, eigenvalues })
    }

    /// The first `n` eigenpairs of a spectrum.
    pub fn from_spectrum(spectrum: &Spectrum, n: usize, forms: &AssembledForms) -> Result<Self> {
        if n > spectrum.pairs.len() {
            return Err(Error::Precondition(format!(
                "basis of size {n} requested from {} eigenpairs",
                spectrum.pairs.len()
            )));
        }
        let pairs = &spectrum.pairs[..n];
        Self::new(pairs.iter().map(|p| p.psi.clone()).collect(), pairs.iter().map(|p| p.lambda).collect(), forms)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn overlaps(&self, u: &[f64], forms: &AssembledForms) -> Vec<f64> {
        let mu = forms.m.mul_vec(u);
        self.vectors.iter().map(|psi| psi.values().iter().zip(&mu).map(|(a, b)| a * b).sum()).collect()
    }
}

/// `v − Σ ⟨v, ψᵢ⟩ ψᵢ` (applied twice for orthogonality to rounding level).
pub fn deflate(v: &NodalFunction, basis: &DeflationBasis, forms: &AssembledForms) -> Result<NodalFunction> {
    if v.len() != forms.dim() {
        return Err(Error::DimensionMismatch { expected: forms.dim(), got: v.len() });
    }
    let norm0 = forms.mass_inner(v.values(), v.values()).sqrt();
    let mut x = v.values().to_vec();
    for _ in 0..2 {
        for (c, psi) in basis.overlaps(&x, forms).into_iter().zip(&basis.vectors) {
            x.iter_mut().zip(psi.values()).for_each(|(xi, pi)| *xi -= c * pi);
        }
    }
    let norm = forms.mass_inner(&x, &x).sqrt();
    if !(norm >= 1e-12 * norm0.max(f64::MIN_POSITIVE)) || norm0 == 0.0 {
        return Err(Error::InSpan(format!("deflated norm {norm:e} of a vector with norm {norm0:e}")));
    }
    Ok(NodalFunction::from(x))
}

/// `(E − Σ λᵢ oᵢ²) / (1 − Σ oᵢ²)` with its numerator and denominator.
pub fn deflation_quotient(energy: f64, overlaps: &[f64], eigenvalues: &[f64]) -> (f64, f64, f64) {
    let num = energy - overlaps.iter().zip(eigenvalues).map(|(o, l)| l * o * o).sum::<f64>();
    let den = 1.0 - overlaps.iter().map(|o| o * o).sum::<f64>();
    (num, den, num / den)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndBound {
    pub alpha: f64,
    pub n: usize,
    pub d: Option<Point2>,
    pub overlaps: Vec<f64>,
    pub numerator: f64,
    pub denominator: f64,
    /// The bound with the probe energy replaced by `−α²`.
    pub bound: f64,
    /// Same quotient with the exact probe energy (never above `bound`).
    pub exact_energy_bound: f64,
    /// Same quotient with the discrete energy of the nodal probe.
    pub discrete_bound: f64,
    /// Rayleigh quotient of the explicitly deflated nodal probe.
    pub rayleigh_cross_check: f64,
    pub exact_energy: f64,
    pub discrete_energy: f64,
    /// `1 − ‖I u_d‖_M`: how far the interpolated probe is from unit norm.
    pub interpolation_defect: f64,
    pub lambda_next: Option<f64>,
    pub margin: Option<f64>,
}

impl IndBound {
    /// Records the eigenvalue the bound is compared with.
    pub fn with_next(mut self, lambda_next: f64) -> Self {
        self.lambda_next = Some(lambda_next);
        self.margin = Some(self.bound - lambda_next);
        self
    }
}

/// Deflated upper bound for a probe.
pub fn ind_bound(probe: &DirectionProbe, basis: &DeflationBasis, forms: &AssembledForms) -> Result<IndBound> {
    let a = probe.alpha;
    let mut b = ind_bound_for(forms, a, &probe.u, basis, -a * a, Some(probe_energy(probe)))?;
    b.d = Some(probe.d);
    Ok(b)
}

/// Deflated bound for an arbitrary nodal function `u`. `reference_energy`
/// stands in for `a(u, u)` in the headline `bound`; `exact_energy`, when known,
/// gives the exact-energy variant.
pub fn ind_bound_for(
    forms: &AssembledForms,
    alpha: f64,
    u: &NodalFunction,
    basis: &DeflationBasis,
    reference_energy: f64,
    exact_energy: Option<f64>,
) -> Result<IndBound> {
    let norm = forms.mass_inner(u.values(), u.values()).sqrt();
    if !(norm > 0.0) {
        return Err(Error::InSpan("probe has zero norm".into()));
    }
    let unit = NodalFunction::from(u.values().iter().map(|v| v / norm).collect::<Vec<_>>());
    let overlaps = basis.overlaps(unit.values(), forms);
    let sum_sq: f64 = overlaps.iter().map(|o| o * o).sum();
    if !(sum_sq < 1.0 - 1e-10) {
        return Err(Error::InSpan(format!("squared overlaps sum to {sum_sq}")));
    }
    let discrete_energy = apply_form(forms, alpha, &unit, &unit)?;
    let exact_energy = exact_energy.unwrap_or(discrete_energy);
    let (numerator, denominator, bound) = deflation_quotient(reference_energy, &overlaps, &basis.eigenvalues);
    let (_, _, exact_energy_bound) = deflation_quotient(exact_energy, &overlaps, &basis.eigenvalues);
    let (_, _, discrete_bound) = deflation_quotient(discrete_energy, &overlaps, &basis.eigenvalues);
    let w = deflate(&unit, basis, forms)?;
    let rayleigh_cross_check = apply_form(forms, alpha, &w, &w)? / forms.mass_inner(w.values(), w.values());
    Ok(IndBound {
        alpha,
        n: basis.len(),
        d: None,
        overlaps,
        numerator,
        denominator,
        bound,
        exact_energy_bound,
        discrete_bound,
        rayleigh_cross_check,
        exact_energy,
        discrete_energy,
        interpolation_defect: 1.0 - norm,
        lambda_next: None,
        margin: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSearch {
    /// `Σᵢ ⟨u_d, ψᵢ⟩²` for each grid direction `j`.
    pub overlap_sums: Vec<f64>,
    pub best_index: usize,
    pub d: Point2,
    pub overlap_sum: f64,
    pub delta: f64,
    pub success: bool,
}

/// Overlap of the probe with the basis over `m` equispaced directions.
pub fn direction_search(
    forms: &AssembledForms,
    alpha: f64,
    basis: &DeflationBasis,
    m: usize,
    delta: f64,
) -> Result<DirectionSearch> {
    if m < 2 {
        return Err(Error::Invalid(format!("direction grid needs m >= 2, got {m}")));
    }
    let mesh = forms.mesh().ok_or_else(|| Error::Invalid("direction search needs a mesh".into()))?;
    let directions: Vec<Point2> = (0..m).map(|j| grid_direction(j, m)).collect();
    let sums: Vec<f64> = directions
        .par_iter()
        .map(|&d| -> Result<f64> {
            let probe = make_probe(mesh, alpha, d)?;
            let norm = forms.mass_inner(probe.u.values(), probe.u.values()).sqrt();
            Ok(basis.overlaps(probe.u.values(), forms).iter().map(|o| (o / norm).powi(2)).sum())
        })
        .collect::<Result<_>>()?;
    let mut best_index = 0;
    for (j, &s) in sums.iter().enumerate() {
        if s < sums[best_index] {
            best_index = j;
        }
    }
    let overlap_sum = sums[best_index];
    Ok(DirectionSearch {
        overlap_sums: sums,
        best_index,
        d: directions[best_index],
        overlap_sum,
        delta,
        success: overlap_sum <= delta,
    })
}

/// `(cos 2πj/m, sin 2πj/m)`.
pub fn grid_direction(j: usize, m: usize) -> Point2 {
    Point2::unit(std::f64::consts::TAU * j as f64 / m as f64)
}
