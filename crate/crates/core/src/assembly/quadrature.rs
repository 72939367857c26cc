use crate::mesh::Mesh;

/// Symmetric 6-point rule exact for polynomials of degree 4 on a triangle:
/// barycentric points and weights (weights sum to one).
pub const TRIANGLE_RULE_6: [([f64; 3], f64); 6] = {
    const A1: f64 = 0.445_948_490_915_964_886_32;
    const W1: f64 = 0.223_381_589_678_011_465_70;
    const A2: f64 = 0.091_576_213_509_770_743_46;
    const W2: f64 = 0.109_951_743_655_321_867_64;
    const B1: f64 = 1.0 - 2.0 * A1;
    const B2: f64 = 1.0 - 2.0 * A2;
    [
        ([B1, A1, A1], W1),
        ([A1, B1, A1], W1),
        ([A1, A1, B1], W1),
        ([B2, A2, A2], W2),
        ([A2, B2, A2], W2),
        ([A2, A2, B2], W2),
    ]
};

/// `Σ_t |T_t| Σ_q w_q f(t, λ_q)` over the given triangles, summed in the
/// order supplied.
pub fn integrate_with_rule(
    mesh: &Mesh,
    triangles: impl IntoIterator<Item = usize>,
    f: impl Fn(usize, [f64; 3]) -> f64,
) -> f64 {
    let mut total = 0.0;
    for t in triangles {
        let local: f64 = TRIANGLE_RULE_6.iter().map(|(bary, w)| w * f(t, *bary)).sum();
        total += mesh.triangle_area(t) * local;
    }
    total
}

/// Value of the P1 interpolant of `values` at barycentric point `bary` of triangle `t`.
pub(crate) fn interpolate(mesh: &Mesh, values: &[f64], t: usize, bary: [f64; 3]) -> f64 {
    let [a, b, c] = mesh.triangles()[t];
    bary[0] * values[a] + bary[1] * values[b] + bary[2] * values[c]
}

/// `∫ |u|^p` over a set of triangles for the P1 interpolant `u`.
pub fn integrate_abs_pow(mesh: &Mesh, values: &[f64], p: f64, triangles: impl IntoIterator<Item = usize>) -> f64 {
    integrate_with_rule(mesh, triangles, |t, bary| interpolate(mesh, values, t, bary).abs().powf(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{DomainTag, Point2};

    #[test]
    fn rule_is_exact_for_quartics() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        let mesh = Mesh::from_topology(v, vec![[0, 1, 2]], DomainTag::Loaded).unwrap();
        // ∫ x^a y^b over the reference triangle = a! b! / (a + b + 2)!
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        for (a, b) in [(0, 0), (1, 0), (2, 1), (4, 0), (2, 2), (1, 3)] {
            let exact = fact(a) * fact(b) / fact(a + b + 2);
            let q = integrate_with_rule(&mesh, [0], |_, l| l[1].powi(a as i32) * l[2].powi(b as i32));
            assert!((q - exact).abs() < 1e-15, "x^{a} y^{b}: {q} vs {exact}");
        }
        let weights: f64 = TRIANGLE_RULE_6.iter().map(|(_, w)| w).sum();
        assert!((weights - 1.0).abs() < 1e-15);
    }
}
