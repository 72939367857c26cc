//! Semi-analytic negative spectra: the unit interval with Robin conditions at
//! both ends, the unit disk through modified Bessel functions, and the
//! half-plane exponential.
//!
//! On the disk, separating `u = I_m(μr)·(cos mθ, sin mθ)` turns the boundary
//! condition `u_r = αu` at `r = 1` into `μ I_m′(μ) = α I_m(μ)`, i.e.
//! `m + μ I_{m+1}(μ)/I_m(μ) = α`, with eigenvalue `−μ²`. The left side increases
//! from `m` to infinity, so branch `m` exists iff `α > m`.

mod bessel;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub use bessel::{bessel_i, bessel_i_ratio, bessel_i_scaled, bessel_i_scaled_value, MAX_ARGUMENT};

const ROOT_TOLERANCE: f64 = 1e-13;

/// Bisection for an increasing function with `f(lo) < 0 < f(hi)`, down to an
/// absolute bracket width of `tol`.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Precondition(format!("bracket [{lo}, {hi}] does not straddle a root (f = {flo}, {fhi})")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    /// `cosh(μ(x − ½))`, root of `μ tanh(μ/2) = α`.
    Symmetric,
    /// `sinh(μ(x − ½))`, root of `μ coth(μ/2) = α`.
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalBranch {
    pub kind: IntervalKind,
    pub mu: f64,
    pub lambda: f64,
    pub alpha: f64,
}

impl IntervalBranch {
    /// Left side of the branch equation at the stored root, minus `α`.
    pub fn equation_residual(&self) -> f64 {
        let t = (0.5 * self.mu).tanh();
        match self.kind {
            IntervalKind::Symmetric => self.mu * t - self.alpha,
            IntervalKind::Antisymmetric => self.mu / t - self.alpha,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Invalid(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// Negative eigenvalues of `−u″ = λu` on `(0, 1)` with `u′ = αu` on the
/// outward normal at both ends, ascending.
pub fn interval_negative_spectrum(alpha: f64) -> Result<Vec<IntervalBranch>> {
    check_alpha(alpha)?;
    let hi = 2.0 * alpha + 10.0;
    let mut out = Vec::with_capacity(2);
    let mu = bisect_increasing(|mu| mu * (0.5 * mu).tanh() - alpha, 1e-12, hi, ROOT_TOLERANCE)?;
    out.push(IntervalBranch { kind: IntervalKind::Symmetric, mu, lambda: -mu * mu, alpha });
    // μ coth(μ/2) decreases to 2 as μ → 0⁺, so a root needs α > 2.
    if alpha > 2.0 {
        let mu = bisect_increasing(|mu| mu / (0.5 * mu).tanh() - alpha, 1e-12, hi, ROOT_TOLERANCE)?;
        out.push(IntervalBranch { kind: IntervalKind::Antisymmetric, mu, lambda: -mu * mu, alpha });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskBranch {
    pub m: u32,
    pub mu: f64,
    pub lambda: f64,
    pub multiplicity: u32,
    pub alpha: f64,
}

impl DiskBranch {
    /// `|μ I_m′(μ) − α I_m(μ)| / (α I_m(μ))`, evaluated in scaled form.
    pub fn equation_residual(&self) -> Result<f64> {
        let (v, d) = bessel_i_scaled(self.m, self.mu)?;
        Ok((self.mu * d - self.alpha * v).abs() / (self.alpha * v))
    }
}

/// Unit-disk branches `m = 0..=m_max` with `α > m`, sorted by `λ` ascending.
pub fn disk_negative_spectrum(alpha: f64, m_max: u32) -> Result<Vec<DiskBranch>> {
    check_alpha(alpha)?;
    let needed = alpha.ceil();
    if f64::from(m_max) < needed {
        return Err(Error::Precondition(format!(
            "m_max = {m_max} would miss branches; need at least ceil(alpha) = {needed}"
        )));
    }
    let hi = 2.0 * alpha + 10.0;
    if hi > MAX_ARGUMENT {
        return Err(Error::Overflow(format!("alpha = {alpha} exceeds the Bessel range")));
    }
    let mut out = Vec::new();
    for m in 0..=m_max {
        if !(alpha > f64::from(m)) {
            break;
        }
        let g = |mu: f64| f64::from(m) + mu * bessel_i_ratio(m, mu) - alpha;
        let mu = bisect_increasing(g, 1e-10, hi, ROOT_TOLERANCE)?;
        out.push(DiskBranch { m, mu, lambda: -mu * mu, multiplicity: if m == 0 { 1 } else { 2 }, alpha });
    }
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(out)
}

/// Disk eigenvalues repeated by multiplicity, ascending.
pub fn disk_eigenvalues_with_multiplicity(branches: &[DiskBranch]) -> Vec<f64> {
    branches.iter().flat_map(|b| std::iter::repeat_n(b.lambda, b.multiplicity as usize)).collect()
}

pub fn disk_csv(branches: &[DiskBranch]) -> String {
    let mut out = String::from("alpha,m,mu,lambda,multiplicity\n");
    for b in branches {
        let _ = writeln!(out, "{},{},{},{},{}", b.alpha, b.m, b.mu, b.lambda, b.multiplicity);
    }
    out
}

pub fn interval_csv(branches: &[IntervalBranch]) -> String {
    let mut out = String::from("alpha,kind,mu,lambda\n");
    for b in branches {
        let kind = match b.kind {
            IntervalKind::Symmetric => "symmetric",
            IntervalKind::Antisymmetric => "antisymmetric",
        };
        let _ = writeln!(out, "{},{},{},{}", b.alpha, kind, b.mu, b.lambda);
    }
    out
}

/// Finite-difference check of `u = e^{α y}` on the half-plane `y < 0`:
/// `Δu = α² u` inside and `∂_y u = α u` on `y = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfSpaceReport {
    pub alpha: f64,
    pub lambda: f64,
    pub h: f64,
    /// Max relative residual of the five-point Laplacian at `h` and `h/2`.
    pub residual_coarse: f64,
    pub residual_fine: f64,
    pub observed_order: f64,
    /// Relative error of the centred difference of the trace relation at `h`.
    pub trace_residual: f64,
}

pub fn halfspace_check(alpha: f64, h: f64) -> Result<HalfSpaceReport> {
    if !(h > 0.0 && h.is_finite()) || !alpha.is_finite() {
        return Err(Error::Invalid(format!("need finite alpha and h > 0, got alpha = {alpha}, h = {h}")));
    }
    let residual_coarse = laplacian_residual(alpha, h);
    let residual_fine = laplacian_residual(alpha, 0.5 * h);
    let observed_order = if residual_fine > 0.0 { (residual_coarse / residual_fine).log2() } else { f64::NAN };
    let u = |y: f64| (alpha * y).exp();
    let trace = (u(h) - u(-h)) / (2.0 * h);
    let trace_residual = if alpha == 0.0 { trace.abs() } else { (trace - alpha).abs() / alpha };
    Ok(HalfSpaceReport {
        alpha,
        lambda: -alpha * alpha,
        h,
        residual_coarse,
        residual_fine,
        observed_order,
        trace_residual,
    })
}

/// Five-point Laplacian of `e^{αy}` on a small grid in `[−½, ½] × [−1, −½]`.
fn laplacian_residual(alpha: f64, h: f64) -> f64 {
    let u = |_x: f64, y: f64| (alpha * y).exp();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let x = -0.5 + 0.25 * i as f64;
            let y = -1.0 + 0.125 * j as f64;
            let c = u(x, y);
            let lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * c) / (h * h);
            let r = lap - alpha * alpha * c;
            let scale = alpha * alpha * c;
            worst = worst.max(if r == 0.0 { 0.0 } else { (r / scale).abs() });
        }
    }
    worst
}
