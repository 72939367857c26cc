//! Parameter sweeps and the diagnostics evaluated along them: eigenvalue
//! ratios `λ_n / (−α²)`, interior decay of eigenfunctions, the interior
//! lower bound obtained from a cutoff, and the weighted-boundary variant.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::interval_negative_spectrum;
use crate::assembly::{assemble, integrate_abs_pow, integrate_with_rule, interpolate, AssembledForms, NodalFunction};
use crate::eigen::{solve, SolverOptions, Spectrum};
use crate::error::{Error, Result};
use crate::mesh::{generate_mesh, shrink_subdomain, DomainSpec, Mesh, Point2};

/// Below this the interior estimate's denominator is considered numerically
/// zero and the estimate is reported as vacuous.
pub const VACUOUS_DENOMINATOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub n_max: usize,
    /// Mesh size at level 0; level `L` uses `base_h / 2^L`.
    pub base_h: f64,
    /// Resolution rule: the level is escalated until `α h ≤ max_alpha_h`.
    pub max_alpha_h: f64,
    /// Levels added on top of the resolution rule.
    pub extra_levels: u32,
    /// Lebesgue exponent for the concentration diagnostics.
    pub p: f64,
    /// Interior margin for the concentration diagnostics.
    pub margin: f64,
    pub solver: SolverOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alphas: vec![5.0, 10.0, 20.0, 40.0],
            n_max: 4,
            base_h: 0.4,
            max_alpha_h: 0.5,
            extra_levels: 0,
            p: 2.0,
            margin: 0.5,
            solver: SolverOptions::default(),
        }
    }
}

impl SweepConfig {
    pub fn new(alphas: Vec<f64>, n_max: usize) -> Self {
        Self { alphas, n_max, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::Invalid("sweep needs at least one alpha".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::Invalid(format!("sweep alphas must be positive and finite, got {a}")));
        }
        if self.alphas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("sweep alphas must be strictly increasing".into()));
        }
        if self.n_max == 0 {
            return Err(Error::Invalid("n_max must be at least 1".into()));
        }
        if !(self.base_h > 0.0 && self.base_h.is_finite()) || !(self.max_alpha_h > 0.0 && self.max_alpha_h.is_finite())
        {
            return Err(Error::Invalid("base_h and max_alpha_h must be positive".into()));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::Invalid(format!("p must be finite and >= 1, got {}", self.p)));
        }
        if !(self.margin > 0.0) {
            return Err(Error::Invalid(format!("margin must be positive, got {}", self.margin)));
        }
        self.solver.validate()
    }

    /// Mesh level and size used at `alpha`.
    pub fn level_for(&self, alpha: f64) -> (u32, f64) {
        let mut level = 0;
        let mut h = self.base_h;
        while alpha * h > self.max_alpha_h * (1.0 + 1e-12) && level < 30 {
            level += 1;
            h *= 0.5;
        }
        let level = level + self.extra_levels;
        (level, self.base_h / 2f64.powi(level as i32))
    }

    fn solver_for(&self) -> SolverOptions {
        SolverOptions { count: self.n_max.max(self.solver.count), ..self.solver.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub n: usize,
    pub lambda: f64,
    pub ratio: f64,
    pub residual: f64,
    pub mesh_level: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub alpha: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<SweepFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepDomain {
    Planar(DomainSpec),
    /// The unit interval, evaluated through its closed-form branches.
    Interval,
}

/// One solved sweep point with everything needed for further diagnostics.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub alpha: f64,
    pub level: u32,
    pub h: f64,
    pub forms: AssembledForms,
    pub spectrum: Spectrum,
}

impl SweepPoint {
    pub fn mesh(&self) -> &Arc<Mesh> {
        self.forms.mesh().expect("sweep points are assembled on meshes")
    }

    pub fn records(&self, n_max: usize) -> Vec<SweepRecord> {
        self.spectrum
            .pairs
            .iter()
            .take(n_max)
            .enumerate()
            .map(|(i, p)| SweepRecord {
                alpha: self.alpha,
                n: i + 1,
                lambda: p.lambda,
                ratio: p.lambda / (-self.alpha * self.alpha),
                residual: p.residual,
                mesh_level: self.level,
            })
            .collect()
    }
}

/// Boundary weight `b`, evaluated at boundary edge midpoints.
pub type BoundaryWeight = dyn Fn(Point2) -> f64 + Sync;

/// Meshes, assembles and solves every `α` of the sweep in parallel. Results
/// come back in the order of `config.alphas`.
pub fn solve_sweep_points(
    config: &SweepConfig,
    domain: &DomainSpec,
    weight: Option<&BoundaryWeight>,
) -> Result<Vec<(f64, Result<SweepPoint>)>> {
    config.validate()?;
    domain.validate()?;
    let opts = config.solver_for();
    Ok(config.alphas.par_iter().map(|&alpha| (alpha, solve_point(config, domain, weight, &opts, alpha))).collect())
}

fn solve_point(
    config: &SweepConfig,
    domain: &DomainSpec,
    weight: Option<&BoundaryWeight>,
    opts: &SolverOptions,
    alpha: f64,
) -> Result<SweepPoint> {
    let (level, h) = config.level_for(alpha);
    let mesh = Arc::new(generate_mesh(&domain.with_h(h))?);
    let weights: Option<Vec<f64>> = weight.map(|b| {
        let v = mesh.vertices();
        mesh.boundary_edges().iter().map(|e| b((v[e.vertices[0]] + v[e.vertices[1]]) * 0.5)).collect()
    });
    let forms = assemble(mesh, weights.as_deref())?;
    let spectrum = solve(&forms, alpha, opts)?;
    Ok(SweepPoint { alpha, level, h, forms, spectrum })
}

/// Ratio sweep. A failing `α` is reported in `failures` while the other
/// points still produce records.
pub fn run_sweep(config: &SweepConfig, domain: &SweepDomain) -> Result<SweepOutcome> {
    let mut out = SweepOutcome::default();
    match domain {
        SweepDomain::Planar(spec) => {
            for (alpha, point) in solve_sweep_points(config, spec, None)? {
                match point {
                    Ok(p) => out.records.extend(p.records(config.n_max)),
                    Err(e) => out.failures.push(SweepFailure { alpha, error: e.to_string() }),
                }
            }
        }
        SweepDomain::Interval => {
            config.validate()?;
            if config.n_max > 2 {
                return Err(Error::Precondition(
                    "the interval has at most two negative eigenvalues; use n_max <= 2".into(),
                ));
            }
            for &alpha in &config.alphas {
                let branches = interval_negative_spectrum(alpha)?;
                if branches.len() < config.n_max {
                    out.failures.push(SweepFailure {
                        alpha,
                        error: format!("only {} negative eigenvalue(s) at this alpha", branches.len()),
                    });
                }
                for (i, b) in branches.iter().take(config.n_max).enumerate() {
                    out.records.push(SweepRecord {
                        alpha,
                        n: i + 1,
                        lambda: b.lambda,
                        ratio: b.lambda / (-alpha * alpha),
                        residual: b.equation_residual().abs(),
                        mesh_level: 0,
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut s = String::from("alpha,n,lambda,ratio,residual,mesh_level\n");
    for r in records {
        let _ = writeln!(s, "{},{},{},{},{:e},{}", r.alpha, r.n, r.lambda, r.ratio, r.residual, r.mesh_level);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub alpha: f64,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub margin: f64,
    /// `‖ψ‖_{L^p(Ω₀)}` with `‖ψ‖_{L^p(Ω)} = 1`.
    pub interior_p: f64,
    pub global_q: f64,
    pub global_r: f64,
    /// `∫_{Ω₀} |ψ|^q` and its complement `∫_{Ω∖Ω₀} |ψ|^q`, which add up to
    /// `global_q^q`.
    pub interior_q_mass: f64,
    pub collar_q_mass: f64,
}

fn check_exponents(p: f64, q: f64, r: f64) -> Result<()> {
    if !(1.0 <= q && q < p && p < r && r.is_finite()) {
        return Err(Error::Invalid(format!("exponents must satisfy 1 <= q < p < r < inf, got q={q}, p={p}, r={r}")));
    }
    Ok(())
}

pub fn concentration(
    spectrum: &Spectrum,
    forms: &AssembledForms,
    p: f64,
    q: f64,
    r: f64,
    margin: f64,
) -> Result<Vec<ConcentrationReport>> {
    check_exponents(p, q, r)?;
    let mesh = forms.mesh().ok_or_else(|| Error::Invalid("concentration needs a mesh".into()))?;
    let sub = shrink_subdomain(mesh, margin)?;
    let mut inside = vec![false; mesh.triangles().len()];
    sub.triangles.iter().for_each(|&t| inside[t] = true);
    let collar: Vec<usize> = (0..inside.len()).filter(|&t| !inside[t]).collect();

    spectrum
        .pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let values = pair.psi.values();
            let norm_p = integrate_abs_pow(mesh, values, p, 0..inside.len()).powf(1.0 / p);
            if !(norm_p > 0.0) {
                return Err(Error::Invalid(format!("eigenfunction {} has zero L^p norm", i + 1)));
            }
            let psi: Vec<f64> = values.iter().map(|v| v / norm_p).collect();
            let pow = |e: f64, tris: &[usize]| integrate_abs_pow(mesh, &psi, e, tris.iter().copied());
            let interior_q_mass = pow(q, &sub.triangles);
            let collar_q_mass = pow(q, &collar);
            Ok(ConcentrationReport {
                alpha: spectrum.alpha,
                n: i + 1,
                p,
                q,
                r,
                margin,
                interior_p: pow(p, &sub.triangles).powf(1.0 / p),
                global_q: (interior_q_mass + collar_q_mass).powf(1.0 / q),
                global_r: integrate_abs_pow(mesh, &psi, r, 0..inside.len()).powf(1.0 / r),
                interior_q_mass,
                collar_q_mass,
            })
        })
        .collect()
}

pub fn concentration_csv(reports: &[ConcentrationReport]) -> String {
    let mut s = String::from("alpha,n,p,q,r,interior_p,global_q,global_r\n");
    for c in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:e},{:e},{:e}",
            c.alpha, c.n, c.p, c.q, c.r, c.interior_p, c.global_q, c.global_r
        );
    }
    s
}

/// The cutoff `φ(x) = min(1, dist(x, ∂Ω) / margin)` at the vertices: one on
/// the margin-shrunk subdomain, zero on the boundary, linear in between.
pub fn tent_cutoff(mesh: &Mesh, margin: f64) -> Result<NodalFunction> {
    shrink_subdomain(mesh, margin)?;
    let values = mesh.boundary_distances().into_iter().map(|d| (d / margin).min(1.0)).collect();
    NodalFunction::new(values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteriorEstimate {
    pub alpha: f64,
    pub n: usize,
    pub p: f64,
    pub margin: f64,
    pub cutoff: String,
    /// `∫ |ψ|^p |∇φ|²` with `‖ψ‖_{L^p} = 1`.
    pub numerator: f64,
    /// `∫ |ψ|^p φ²` with `‖ψ‖_{L^p} = 1`.
    pub denominator: f64,
    /// `‖∇φ‖²_∞ / (p − 1)`, a bound on `−bound` whenever the mass of `ψ` on
    /// the support of `∇φ` does not exceed its mass weighted by `φ²`.
    pub k_constant: f64,
    /// `−numerator / ((p − 1) denominator)`; `None` when vacuous.
    pub bound: Option<f64>,
    pub lambda: f64,
    pub vacuous: bool,
}

impl InteriorEstimate {
    /// `λ ≥ bound − tol`; vacuous estimates hold trivially.
    pub fn holds(&self, tol: f64) -> bool {
        self.bound.is_none_or(|b| self.lambda >= b - tol)
    }

    pub fn slack(&self) -> Option<f64> {
        self.bound.map(|b| self.lambda - b)
    }
}

pub fn interior_estimate(
    spectrum: &Spectrum,
    forms: &AssembledForms,
    p: f64,
    margin: f64,
) -> Result<Vec<InteriorEstimate>> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::Invalid(format!("the interior estimate needs finite p >= 2, got {p}")));
    }
    let mesh = forms.mesh().ok_or_else(|| Error::Invalid("interior estimate needs a mesh".into()))?;
    let phi = tent_cutoff(mesh, margin)?;
    let grad_sq: Vec<f64> = (0..mesh.triangles().len())
        .map(|t| gradient(mesh, phi.values(), t).dot(gradient(mesh, phi.values(), t)))
        .collect();
    let k_constant = grad_sq.iter().copied().fold(0.0, f64::max) / (p - 1.0);
    let interp = |v: &[f64], t: usize, b: [f64; 3]| interpolate(mesh, v, t, b);
    let all = 0..mesh.triangles().len();

    spectrum
        .pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let norm_p = integrate_abs_pow(mesh, pair.psi.values(), p, all.clone()).powf(1.0 / p);
            let psi: Vec<f64> = pair.psi.values().iter().map(|v| v / norm_p).collect();
            let numerator =
                integrate_with_rule(mesh, all.clone(), |t, b| interp(&psi, t, b).abs().powf(p) * grad_sq[t]);
            let denominator = integrate_with_rule(mesh, all.clone(), |t, b| {
                interp(&psi, t, b).abs().powf(p) * interp(phi.values(), t, b).powi(2)
            });
            let vacuous = !(denominator >= VACUOUS_DENOMINATOR);
            Ok(InteriorEstimate {
                alpha: spectrum.alpha,
                n: i + 1,
                p,
                margin,
                cutoff: format!("tent: min(1, dist(x, boundary) / {margin})"),
                numerator,
                denominator,
                k_constant,
                bound: (!vacuous).then(|| -numerator / ((p - 1.0) * denominator)),
                lambda: pair.lambda,
                vacuous,
            })
        })
        .collect()
}

fn gradient(mesh: &Mesh, values: &[f64], t: usize) -> Point2 {
    let [a, b, c] = mesh.triangle_points(t);
    let [i, j, k] = mesh.triangles()[t];
    let (e1, e2) = (b - a, c - a);
    let det = e1.cross(e2);
    let (d1, d2) = (values[j] - values[i], values[k] - values[i]);
    Point2::new((d1 * e2.y - d2 * e1.y) / det, (d2 * e1.x - d1 * e2.x) / det)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedRow {
    pub alpha: f64,
    pub n: usize,
    pub lambda: f64,
    /// `λ / (−α²)`.
    pub ratio: f64,
    /// `λ / (−α² b_max²)`.
    pub normalized_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedReport {
    pub max_weight: f64,
    pub rows: Vec<WeightedRow>,
    pub failures: Vec<SweepFailure>,
    pub largest_alpha: f64,
    /// Largest normalized ratio at the largest `α`.
    pub worst_at_largest: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Sweeps with boundary weight `b` and checks `λ_n / (−α² max b²) ≤ 1 + tol`
/// at the largest `α`.
pub fn weighted_limsup_check(
    config: &SweepConfig,
    domain: &DomainSpec,
    weight: &BoundaryWeight,
    tolerance: f64,
) -> Result<WeightedReport> {
    let points = solve_sweep_points(config, domain, Some(weight))?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut max_weight = f64::NEG_INFINITY;
    for (alpha, point) in points {
        match point {
            Ok(p) => {
                let b = p.forms.max_weight().unwrap_or(0.0);
                if !(b > 0.0) {
                    return Err(Error::Invalid(format!("boundary weight must have a positive maximum, got {b}")));
                }
                max_weight = max_weight.max(b);
                for r in p.records(config.n_max) {
                    rows.push(WeightedRow {
                        alpha,
                        n: r.n,
                        lambda: r.lambda,
                        ratio: r.ratio,
                        normalized_ratio: r.ratio / (b * b),
                    });
                }
            }
            Err(e) => failures.push(SweepFailure { alpha, error: e.to_string() }),
        }
    }
    let largest_alpha = *config.alphas.last().expect("validated non-empty");
    let worst_at_largest =
        rows.iter().filter(|r| r.alpha == largest_alpha).map(|r| r.normalized_ratio).fold(f64::NEG_INFINITY, f64::max);
    let passed = failures.is_empty() && worst_at_largest <= 1.0 + tolerance;
    Ok(WeightedReport { max_weight, rows, failures, largest_alpha, worst_at_largest, tolerance, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::negative_count;

    #[test]
    fn config_validation() {
        assert!(SweepConfig::new(vec![0.0, 1.0], 1).validate().is_err());
        assert!(SweepConfig::new(vec![2.0, 1.0], 1).validate().is_err());
        assert!(SweepConfig::new(vec![1.0], 0).validate().is_err());
        assert!(SweepConfig::new(vec![1.0, 2.0], 1).validate().is_ok());
    }

    #[test]
    fn resolution_rule() {
        let c = SweepConfig::default();
        assert_eq!(c.level_for(1.0), (0, 0.4));
        assert_eq!(c.level_for(5.0).0, 2);
        for a in [5.0, 10.0, 20.0, 40.0, 33.0] {
            let (_, h) = c.level_for(a);
            assert!(a * h <= 0.5 + 1e-12 && a * 2.0 * h > 0.5);
        }
    }

    #[test]
    fn interval_sweep_uses_closed_form() {
        let c = SweepConfig::new(vec![10.0, 50.0], 2);
        let out = run_sweep(&c, &SweepDomain::Interval).unwrap();
        assert_eq!(out.records.len(), 4);
        assert!(out.failures.is_empty());
        assert!(out.records.iter().all(|r| (r.ratio - 1.0).abs() < 0.01));
        assert!(run_sweep(&SweepConfig::new(vec![10.0], 3), &SweepDomain::Interval).is_err());
        let csv = sweep_csv(&out.records);
        assert!(csv.starts_with("alpha,n,lambda,ratio,residual,mesh_level\n10,1,"));
    }

    #[test]
    fn disk_sweep_is_ordered_and_deterministic() {
        let c = SweepConfig::new(vec![2.0, 4.0], 3);
        let d = SweepDomain::Planar(DomainSpec::unit_disk(0.4));
        let a = run_sweep(&c, &d).unwrap();
        let b = run_sweep(&c, &d).unwrap();
        assert_eq!(sweep_csv(&a.records), sweep_csv(&b.records));
        let keys: Vec<(f64, usize)> = a.records.iter().map(|r| (r.alpha, r.n)).collect();
        assert_eq!(keys, vec![(2.0, 1), (2.0, 2), (2.0, 3), (4.0, 1), (4.0, 2), (4.0, 3)]);
    }

    fn neumann_point(h: f64) -> SweepPoint {
        let c = SweepConfig { base_h: h, ..SweepConfig::new(vec![1e-9], 1) };
        let pts = solve_sweep_points(&c, &DomainSpec::unit_square(h), None).unwrap();
        let mut p = pts.into_iter().next().unwrap().1.unwrap();
        p.spectrum = solve(&p.forms, 0.0, &SolverOptions::with_count(1)).unwrap();
        p
    }

    #[test]
    fn uniform_mass_baseline() {
        let p = neumann_point(0.05);
        let sub = shrink_subdomain(p.mesh(), 0.2).unwrap();
        let c = &concentration(&p.spectrum, &p.forms, 2.0, 1.0, 4.0, 0.2).unwrap()[0];
        let want = (sub.area(p.mesh()) / 1.0).sqrt();
        assert!((c.interior_p - want).abs() < 1e-8, "{} {}", c.interior_p, want);
        assert!((c.interior_q_mass + c.collar_q_mass - c.global_q).abs() < 1e-10);
        assert!(concentration(&p.spectrum, &p.forms, 2.0, 2.0, 4.0, 0.2).is_err());
        assert!(matches!(
            concentration(&p.spectrum, &p.forms, 2.0, 1.0, 4.0, 0.9),
            Err(Error::InfeasibleMargin { .. })
        ));
    }

    #[test]
    fn tent_vanishes_on_the_boundary() {
        let mesh = generate_mesh(&DomainSpec::unit_square(0.1)).unwrap();
        let phi = tent_cutoff(&mesh, 0.2).unwrap();
        for (v, x) in phi.values().iter().enumerate() {
            if mesh.is_boundary_vertex(v) {
                assert_eq!(*x, 0.0);
            }
            assert!((0.0..=1.0).contains(x));
        }
        assert!(phi.values().contains(&1.0));
    }

    #[test]
    fn interior_estimate_on_the_square() {
        let c = SweepConfig::new(vec![1.0], 3);
        let pts = solve_sweep_points(&c, &DomainSpec::unit_square(0.05), None).unwrap();
        let p = pts[0].1.as_ref().unwrap();
        assert_eq!(negative_count(&p.spectrum).unwrap().with_multiplicity, 1);
        for est in interior_estimate(&p.spectrum, &p.forms, 2.0, 0.2).unwrap() {
            assert!(!est.vacuous);
            assert!(est.holds(1e-8), "{est:?}");
        }
        assert!(interior_estimate(&p.spectrum, &p.forms, 1.5, 0.2).is_err());
    }

    #[test]
    fn constant_weight_is_absorbed_into_alpha() {
        let c1 = SweepConfig { base_h: 0.2, max_alpha_h: 100.0, ..SweepConfig::new(vec![3.0], 3) };
        let c2 = SweepConfig { alphas: vec![6.0], ..c1.clone() };
        let disk = DomainSpec::unit_disk(0.2);
        let w = weighted_limsup_check(&c1, &disk, &|_| 2.0, 0.05).unwrap();
        let u = weighted_limsup_check(&c2, &disk, &|_| 1.0, 0.05).unwrap();
        assert_eq!(w.max_weight, 2.0);
        for (a, b) in w.rows.iter().zip(&u.rows) {
            assert!((a.lambda - b.lambda).abs() <= 1e-8 * b.lambda.abs());
        }
    }
}
