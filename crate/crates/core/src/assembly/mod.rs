//! Piecewise-linear finite element forms for the Robin Laplacian.
//!
//! The bilinear form `a(u, v) = ∫ ∇u·∇v − α ∫_∂ b u v` is carried by three
//! matrices: stiffness `A`, boundary mass `B` (with the weight `b` folded in)
//! and interior mass `M`, so that `a(u, v) = uᵀ(A − αB)v` for nodal
//! coefficient vectors. All element integrals are closed-form.

mod exponential;
mod quadrature;
mod sparse;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Subdomain};

pub use exponential::{exponential_volume_scaled, integrate_exponential, ExpIntegrals};
pub(crate) use quadrature::interpolate;
pub use quadrature::{integrate_abs_pow, integrate_with_rule, TRIANGLE_RULE_6};

pub use sparse::SymmetricSparseMatrix;

/// P1 coefficients, one value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalFunction {
    values: Vec<f64>,
}

impl NodalFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("nodal value {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn constant(len: usize, value: f64) -> Self {
        Self { values: vec![value; len] }
    }

    /// Interpolates `f` at the mesh vertices.
    pub fn interpolate(mesh: &Mesh, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        Self::new(mesh.vertices().iter().map(|p| f(p.x, p.y)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl From<Vec<f64>> for NodalFunction {
    /// Unchecked conversion for values produced by the solver itself.
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

/// Stiffness, boundary mass and interior mass for one mesh and weight.
#[derive(Debug, Clone)]
pub struct AssembledForms {
    pub a: SymmetricSparseMatrix,
    pub b: SymmetricSparseMatrix,
    pub m: SymmetricSparseMatrix,
    /// Per-boundary-edge weight; empty when the forms were not built from a mesh.
    pub weight: Vec<f64>,
    mesh: Option<Arc<Mesh>>,
}

impl AssembledForms {
    /// Wraps explicit matrices, e.g. for small algebraic test problems.
    pub fn from_matrices(a: SymmetricSparseMatrix, b: SymmetricSparseMatrix, m: SymmetricSparseMatrix) -> Result<Self> {
        let n = a.dim();
        for other in [&b, &m] {
            if other.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: other.dim() });
            }
        }
        Ok(Self { a, b, m, weight: Vec::new(), mesh: None })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn mesh(&self) -> Option<&Arc<Mesh>> {
        self.mesh.as_ref()
    }

    pub(crate) fn require_mesh(&self) -> Result<&Mesh> {
        self.mesh.as_deref().ok_or_else(|| Error::Invalid("operation needs forms assembled on a mesh".into()))
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.weight.iter().copied().reduce(f64::max)
    }

    /// `A − αB`.
    pub fn operator(&self, alpha: f64) -> Result<SymmetricSparseMatrix> {
        SymmetricSparseMatrix::linear_combination(&[(1.0, &self.a), (-alpha, &self.b)])
    }

    pub fn mass_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.m.bilinear(u, v)
    }

    fn check_len(&self, u: &NodalFunction) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        Ok(())
    }
}

/// Assembles the P1 forms on `mesh`, optionally weighting the boundary term
/// edge by edge.
pub fn assemble(mesh: Arc<Mesh>, weight: Option<&[f64]>) -> Result<AssembledForms> {
    let nb = mesh.boundary_edges().len();
    let weight: Vec<f64> = match weight {
        Some(w) if w.len() != nb => return Err(Error::DimensionMismatch { expected: nb, got: w.len() }),
        Some(w) => {
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::Invalid("boundary weight is not finite".into()));
            }
            w.to_vec()
        }
        None => vec![1.0; nb],
    };

    let n = mesh.vertex_count();
    let nt = mesh.triangles().len();
    let mut a = Vec::with_capacity(9 * nt);
    let mut m = Vec::with_capacity(9 * nt);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [p0, p1, p2] = mesh.triangle_points(t);
        let area = mesh.triangle_area(t);
        // Gradient of the hat function at local vertex i is (b_i, c_i) / (2|T|).
        let b = [p1.y - p2.y, p2.y - p0.y, p0.y - p1.y];
        let c = [p2.x - p1.x, p0.x - p2.x, p1.x - p0.x];
        for i in 0..3 {
            for j in i..3 {
                let k = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
                let mass = if i == j { area / 6.0 } else { area / 12.0 };
                a.push((tri[i], tri[j], k));
                m.push((tri[i], tri[j], mass));
            }
        }
    }
    let mut bnd = Vec::with_capacity(3 * nb);
    for (e, w) in mesh.boundary_edges().iter().zip(&weight) {
        let len = mesh.edge_length(e);
        let [i, j] = e.vertices;
        bnd.push((i, i, w * len / 3.0));
        bnd.push((j, j, w * len / 3.0));
        bnd.push((i, j, w * len / 6.0));
    }
    Ok(AssembledForms {
        a: SymmetricSparseMatrix::from_triplets(n, a)?,
        b: SymmetricSparseMatrix::from_triplets(n, bnd)?,
        m: SymmetricSparseMatrix::from_triplets(n, m)?,
        weight,
        mesh: Some(mesh),
    })
}

/// P1 forms for the unit interval `(0, 1)` with `cells` uniform cells and the
/// Robin term at both end points.
pub fn assemble_interval(cells: usize) -> Result<AssembledForms> {
    if cells == 0 {
        return Err(Error::Invalid("interval needs at least one cell".into()));
    }
    let h = 1.0 / cells as f64;
    let n = cells + 1;
    let mut a = Vec::with_capacity(3 * cells);
    let mut m = Vec::with_capacity(3 * cells);
    for e in 0..cells {
        a.extend([(e, e, 1.0 / h), (e + 1, e + 1, 1.0 / h), (e, e + 1, -1.0 / h)]);
        m.extend([(e, e, h / 3.0), (e + 1, e + 1, h / 3.0), (e, e + 1, h / 6.0)]);
    }
    let b = SymmetricSparseMatrix::from_triplets(n, [(0, 0, 1.0), (cells, cells, 1.0)])?;
    AssembledForms::from_matrices(
        SymmetricSparseMatrix::from_triplets(n, a)?,
        b,
        SymmetricSparseMatrix::from_triplets(n, m)?,
    )
    .map(|mut f| {
        f.weight = vec![1.0, 1.0];
        f
    })
}

/// `uᵀAv − α uᵀBv`, the discrete `a(u, v)`.
pub fn apply_form(forms: &AssembledForms, alpha: f64, u: &NodalFunction, v: &NodalFunction) -> Result<f64> {
    forms.check_len(u)?;
    forms.check_len(v)?;
    Ok(forms.a.bilinear(u.values(), v.values()) - alpha * forms.b.bilinear(u.values(), v.values()))
}

/// `(∫ |u|^p)^{1/p}` over the whole mesh or a subdomain, by a degree-4
/// triangle rule applied to the P1 interpolant.
pub fn lp_norm(forms: &AssembledForms, u: &NodalFunction, p: f64, region: Option<&Subdomain>) -> Result<f64> {
    forms.check_len(u)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Invalid(format!("L^p norm needs finite p >= 1, got {p}")));
    }
    let mesh = forms.require_mesh()?;
    let integral = match region {
        Some(sub) => integrate_abs_pow(mesh, u.values(), p, sub.triangles.iter().copied()),
        None => integrate_abs_pow(mesh, u.values(), p, 0..mesh.triangles().len()),
    };
    Ok(integral.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_mesh, shrink_subdomain, DomainSpec, Point2};

    fn square(h: f64) -> AssembledForms {
        assemble(Arc::new(generate_mesh(&DomainSpec::unit_square(h)).unwrap()), None).unwrap()
    }

    #[test]
    fn measures_of_the_unit_square() {
        let f = square(0.1);
        let one = vec![1.0; f.dim()];
        assert!((f.m.bilinear(&one, &one) - 1.0).abs() < 1e-12);
        assert!((f.b.bilinear(&one, &one) - 4.0).abs() < 1e-12);
        assert!(f.a.bilinear(&one, &one).abs() < 1e-12);
    }

    #[test]
    fn constants_have_zero_energy_on_a_disk() {
        let mesh = Arc::new(generate_mesh(&DomainSpec::unit_disk(0.2)).unwrap());
        let f = assemble(mesh, None).unwrap();
        let one = vec![1.0; f.dim()];
        assert!(f.a.bilinear(&one, &one).abs() < 1e-12);
        assert!(f.a.mul_vec(&one).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn reference_triangle_mass() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        let mesh = Mesh::from_topology(v, vec![[0, 1, 2]], crate::mesh::DomainTag::Loaded).unwrap();
        let f = assemble(Arc::new(mesh), None).unwrap();
        let total: f64 = f.m.entries().map(|(r, c, v)| if r == c { v } else { 2.0 * v }).sum();
        assert!((total - 0.5).abs() < 1e-15);
        // Stiffness of the reference element.
        assert!((f.a.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((f.a.get(0, 1) + 0.5).abs() < 1e-15);
        assert_eq!(f.a.get(1, 2), 0.0);
    }

    #[test]
    fn neumann_and_robin_forms_on_constants() {
        let f = square(0.25);
        let one = NodalFunction::constant(f.dim(), 1.0);
        assert!((apply_form(&f, 1.0, &one, &one).unwrap() + 4.0).abs() < 1e-12);
        let x = NodalFunction::interpolate(f.require_mesh().unwrap(), |x, _| x).unwrap();
        let neumann = apply_form(&f, 0.0, &x, &x).unwrap();
        assert!((neumann - f.a.bilinear(x.values(), x.values())).abs() < 1e-15);
        assert!((neumann - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_weight_is_bit_identical() {
        let mesh = Arc::new(generate_mesh(&DomainSpec::unit_disk(0.25)).unwrap());
        let ones = vec![1.0; mesh.boundary_edges().len()];
        let plain = assemble(mesh.clone(), None).unwrap();
        let weighted = assemble(mesh, Some(&ones)).unwrap();
        assert_eq!(plain.b, weighted.b);
        assert_eq!(plain.a, weighted.a);
    }

    #[test]
    fn weight_length_is_checked() {
        let mesh = Arc::new(generate_mesh(&DomainSpec::unit_square(0.5)).unwrap());
        assert!(matches!(assemble(mesh, Some(&[1.0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn apply_form_rejects_mismatched_vectors() {
        let f = square(0.5);
        let u = NodalFunction::constant(3, 1.0);
        let v = NodalFunction::constant(f.dim(), 1.0);
        assert!(apply_form(&f, 1.0, &u, &v).is_err());
    }

    #[test]
    fn lp_norms() {
        let f = square(1.0 / 64.0);
        let one = NodalFunction::constant(f.dim(), 1.0);
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((lp_norm(&f, &one, p, None).unwrap() - 1.0).abs() < 1e-12);
        }
        let mesh = f.require_mesh().unwrap();
        let u = NodalFunction::interpolate(mesh, |x, y| (3.0 * x).sin() * (1.0 + y * y)).unwrap();
        let quad = lp_norm(&f, &u, 2.0, None).unwrap();
        let exact = f.mass_inner(u.values(), u.values()).sqrt();
        assert!((quad - exact).abs() < 1e-3 * exact);
        let sub = shrink_subdomain(mesh, 0.25).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert!(lp_norm(&f, &u, p, Some(&sub)).unwrap() <= lp_norm(&f, &u, p, None).unwrap());
        }
        assert!(lp_norm(&f, &u, 0.5, None).is_err());
    }

    #[test]
    fn interval_forms() {
        let f = assemble_interval(10).unwrap();
        let one = vec![1.0; 11];
        assert!((f.m.bilinear(&one, &one) - 1.0).abs() < 1e-14);
        assert_eq!(f.b.bilinear(&one, &one), 2.0);
        assert!(f.a.bilinear(&one, &one).abs() < 1e-12);
    }
}
