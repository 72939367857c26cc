//! Closed-form integrals of `exp(s x·d)` over triangles and boundary edges.
//!
//! On a simplex an exponential of a linear function integrates to the
//! measure times a divided difference of `exp` at the vertex exponents
//! (times `k!` for a `k`-simplex). Everything is computed relative to a common
//! log-scale so that exponents up to any size stay representable.

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point2};

/// Exponent spread below which the divided difference is summed as a series.
const SERIES_SPREAD: f64 = 0.1;
const SERIES_TERMS: usize = 18;

/// `∫_Ω e^{s x·d}`, `∫_∂Ω e^{s x·d}` and `∫_∂Ω e^{s x·d} ν·d`, each stored as
/// `value = scaled · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpIntegrals {
    pub log_scale: f64,
    pub volume_scaled: f64,
    pub boundary_scaled: f64,
    pub flux_scaled: f64,
}

impl ExpIntegrals {
    pub fn volume(&self) -> f64 {
        self.volume_scaled * self.log_scale.exp()
    }

    pub fn boundary(&self) -> f64 {
        self.boundary_scaled * self.log_scale.exp()
    }

    pub fn flux(&self) -> f64 {
        self.flux_scaled * self.log_scale.exp()
    }

    pub fn ln_volume(&self) -> f64 {
        self.volume_scaled.ln() + self.log_scale
    }
}

fn check_direction(d: Point2, s: f64) -> Result<()> {
    if !d.is_finite() || (d.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!("direction ({}, {}) is not a unit vector", d.x, d.y)));
    }
    if !s.is_finite() {
        return Err(Error::Invalid(format!("exponent scale {s} is not finite")));
    }
    Ok(())
}

/// Largest exponent `s x·d` over the mesh vertices.
pub(crate) fn max_exponent(mesh: &Mesh, d: Point2, s: f64) -> f64 {
    mesh.vertices().iter().map(|p| s * p.dot(d)).fold(f64::NEG_INFINITY, f64::max)
}

pub fn integrate_exponential(mesh: &Mesh, d: Point2, s: f64) -> Result<ExpIntegrals> {
    check_direction(d, s)?;
    let log_scale = max_exponent(mesh, d, s);
    let expo: Vec<f64> = mesh.vertices().iter().map(|p| s * p.dot(d) - log_scale).collect();

    let volume_scaled = volume_sum(mesh, &expo, 0..mesh.triangles().len());
    let (mut boundary_scaled, mut flux_scaled) = (0.0, 0.0);
    for e in mesh.boundary_edges() {
        let [a, b] = e.vertices;
        let v = mesh.edge_length(e) * divided_difference_1(expo[a], expo[b]);
        boundary_scaled += v;
        flux_scaled += v * e.normal.dot(d);
    }
    Ok(ExpIntegrals { log_scale, volume_scaled, boundary_scaled, flux_scaled })
}

/// `e^{−log_scale} ∫ e^{s x·d}` over a subset of triangles.
pub fn exponential_volume_scaled(
    mesh: &Mesh,
    d: Point2,
    s: f64,
    log_scale: f64,
    triangles: impl IntoIterator<Item = usize>,
) -> Result<f64> {
    check_direction(d, s)?;
    let expo: Vec<f64> = mesh.vertices().iter().map(|p| s * p.dot(d) - log_scale).collect();
    Ok(volume_sum(mesh, &expo, triangles))
}

fn volume_sum(mesh: &Mesh, expo: &[f64], triangles: impl IntoIterator<Item = usize>) -> f64 {
    triangles
        .into_iter()
        .map(|t| {
            let [a, b, c] = mesh.triangles()[t];
            2.0 * mesh.triangle_area(t) * divided_difference_2(expo[a], expo[b], expo[c])
        })
        .sum()
}

/// `exp[a, b]`, the first divided difference of `exp`.
pub(crate) fn divided_difference_1(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let gap = hi - lo;
    if gap == 0.0 {
        lo.exp()
    } else if gap > 700.0 {
        (hi.exp() - lo.exp()) / gap
    } else {
        lo.exp() * gap.exp_m1() / gap
    }
}

/// `exp[a, b, c]`, the second divided difference of `exp`.
pub(crate) fn divided_difference_2(a: f64, b: f64, c: f64) -> f64 {
    let mut x = [a, b, c];
    x.sort_by(f64::total_cmp);
    let spread = x[2] - x[0];
    if spread <= SERIES_SPREAD {
        let centre = (x[0] + x[1] + x[2]) / 3.0;
        let y = x.map(|v| v - centre);
        centre.exp() * series_2(y)
    } else {
        (divided_difference_1(x[1], x[2]) - divided_difference_1(x[0], x[1])) / spread
    }
}

/// `Σ_k h_k(y) / (k + 2)!` with `h_k` the complete homogeneous symmetric
/// polynomials, i.e. `exp[y₁, y₂, y₃]` for small `y`.
fn series_2(y: [f64; 3]) -> f64 {
    let mut h = [0.0; SERIES_TERMS];
    let mut p = 1.0;
    for v in h.iter_mut() {
        *v = p;
        p *= y[0];
    }
    for &yi in &y[1..] {
        for k in 1..SERIES_TERMS {
            h[k] += yi * h[k - 1];
        }
    }
    let mut fact = 2.0;
    let mut sum = 0.0;
    for (k, hk) in h.iter().enumerate() {
        sum += hk / fact;
        fact *= (k + 3) as f64;
    }
    sum
}
