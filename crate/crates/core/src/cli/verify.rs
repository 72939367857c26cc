//! The inequality suites bundled by `verify`: probe energies, deflated
//! bounds with their sandwich, cap masses, and the interior estimate.

use std::fmt::Write as _;

use serde::Serialize;

use super::config::RunConfig;
use crate::asymptotics::{interior_estimate, solve_sweep_points, SweepPoint};
use crate::error::{Error, Result};
use crate::mesh::Point2;
use crate::variational::{
    cap_mass_lower_bound, caps, direction_search, grid_direction, ind_bound, make_probe, mass_outside_cap,
    probe_energy, DeflationBasis,
};

/// Probe directions per `α` in the energy suite.
const ENERGY_DIRECTIONS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub alpha: f64,
    pub n: usize,
    pub detail: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,alpha,n,detail,value,limit,pass\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{:e},{:e},{}", r.suite, r.alpha, r.n, r.detail, r.value, r.limit, r.pass);
        }
        s
    }

    /// Per-suite pass counts, one line per suite in first-seen order.
    pub fn table(&self) -> String {
        let mut suites: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !suites.contains(&r.suite) {
                suites.push(r.suite);
            }
        }
        let mut s = String::new();
        for suite in suites {
            let rows: Vec<&CheckRow> = self.rows.iter().filter(|r| r.suite == suite).collect();
            let ok = rows.iter().filter(|r| r.pass).count();
            let status = if ok == rows.len() { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status} {suite:<20} {ok}/{}", rows.len());
            for r in rows.iter().filter(|r| !r.pass) {
                let _ = writeln!(
                    s,
                    "     alpha={} n={} {}: value {:e} vs limit {:e}",
                    r.alpha, r.n, r.detail, r.value, r.limit
                );
            }
        }
        s
    }
}

pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate("verify")?;
    let spec = cfg.domain.spec(cfg.h_for(cfg.alphas[0]))?;
    let points = solve_sweep_points(&cfg.sweep(cfg.n + 1), &spec, None)?;
    let mut report = VerifyReport::default();
    let mut previous_mass: Option<f64> = None;
    for (alpha, point) in points {
        let point = point?;
        probe_suite(&point, &mut report.rows)?;
        bound_suite(cfg, &point, &mut report.rows)?;
        let mass = cap_suite(&point, previous_mass, &mut report.rows)?;
        previous_mass = Some(mass);
        interior_suite(cfg, &point, &mut report.rows)?;
        debug_assert_eq!(alpha, point.alpha);
    }
    Ok(report)
}

fn probe_suite(point: &SweepPoint, rows: &mut Vec<CheckRow>) -> Result<()> {
    let a = point.alpha;
    for j in 0..ENERGY_DIRECTIONS {
        let probe = make_probe(point.mesh(), a, grid_direction(j, ENERGY_DIRECTIONS))?;
        let e = probe_energy(&probe);
        rows.push(CheckRow {
            suite: "probe_energy",
            alpha: a,
            n: 0,
            detail: format!("direction {j}/{ENERGY_DIRECTIONS}"),
            value: e,
            limit: -a * a,
            pass: e <= -a * a,
        });
    }
    Ok(())
}

fn bound_suite(cfg: &RunConfig, point: &SweepPoint, rows: &mut Vec<CheckRow>) -> Result<()> {
    let a = point.alpha;
    let pairs = &point.spectrum.pairs;
    for n in 1..=cfg.n {
        let basis = DeflationBasis::from_spectrum(&point.spectrum, n, &point.forms)?;
        let search = direction_search(&point.forms, a, &basis, cfg.m, cfg.delta)?;
        let next = pairs[n].lambda;
        if !search.success {
            rows.push(CheckRow {
                suite: "deflated_bound",
                alpha: a,
                n,
                detail: format!("no direction with overlap <= {} (flagged not failed)", cfg.delta),
                value: search.overlap_sum,
                limit: cfg.delta,
                pass: true,
            });
            continue;
        }
        let probe = make_probe(point.mesh(), a, search.d)?;
        let b = match ind_bound(&probe, &basis, &point.forms) {
            Ok(b) => b,
            Err(Error::InSpan(msg)) => return Err(Error::InSpan(format!("alpha {a}, n {n}: {msg}"))),
            Err(e) => return Err(e),
        };
        let tol = cfg.solver.tolerance * next.abs().max(1.0);
        let d = format!("direction {} of {}", search.best_index, cfg.m);
        rows.push(CheckRow {
            suite: "deflated_bound",
            alpha: a,
            n,
            detail: format!("{d}: bound >= lambda_(n+1)"),
            value: b.bound,
            limit: next - tol,
            pass: b.bound >= next - tol,
        });
        let gap = (b.discrete_bound - b.rayleigh_cross_check).abs();
        let scale = b.rayleigh_cross_check.abs().max(1.0);
        rows.push(CheckRow {
            suite: "rayleigh_identity",
            alpha: a,
            n,
            detail: format!("{d}: |quotient formula - deflated Rayleigh quotient|"),
            value: gap,
            limit: 1e-8 * scale,
            pass: gap <= 1e-8 * scale,
        });
        rows.push(CheckRow {
            suite: "exact_energy_bound",
            alpha: a,
            n,
            detail: format!("{d}: exact-energy quotient <= bound"),
            value: b.exact_energy_bound,
            limit: b.bound,
            pass: b.exact_energy_bound <= b.bound,
        });
        // λ₁/(−α²) ≥ λ_{n+1}/(−α²) ≥ bound/(−α²)
        let s = -a * a;
        let (r1, rn, rb) = (pairs[0].lambda / s, next / s, b.bound / s);
        let rtol = tol / (a * a);
        rows.push(CheckRow {
            suite: "sandwich",
            alpha: a,
            n,
            detail: "ratio_1 >= ratio_(n+1)".into(),
            value: r1,
            limit: rn - rtol,
            pass: r1 >= rn - rtol,
        });
        rows.push(CheckRow {
            suite: "sandwich",
            alpha: a,
            n,
            detail: "ratio_(n+1) >= deflated quotient ratio".into(),
            value: rn,
            limit: rb - rtol,
            pass: rn >= rb - rtol,
        });
    }
    Ok(())
}

/// Mass of the `d = (0, 1)` probe outside the cap half a unit below its
/// top; returns the mass for the monotonicity check across `α`.
fn cap_suite(point: &SweepPoint, previous: Option<f64>, rows: &mut Vec<CheckRow>) -> Result<f64> {
    let a = point.alpha;
    let d = Point2::new(0.0, 1.0);
    let probe = make_probe(point.mesh(), a, d)?;
    let top = caps(point.mesh(), d, &[f64::INFINITY])?[0].kappa_d;
    let cap = caps(point.mesh(), d, &[top - 0.5])?.remove(0);
    let outside = mass_outside_cap(&probe, &cap)?;
    let lower = cap_mass_lower_bound(&probe, &cap);
    rows.push(CheckRow {
        suite: "cap_mass",
        alpha: a,
        n: 0,
        detail: "c^2 e^(2 alpha kappa) |cap| <= mass inside cap".into(),
        value: lower,
        limit: 1.0 - outside,
        pass: lower <= (1.0 - outside) * (1.0 + 1e-12),
    });
    if let Some(prev) = previous {
        rows.push(CheckRow {
            suite: "cap_mass",
            alpha: a,
            n: 0,
            detail: "mass outside cap nonincreasing in alpha".into(),
            value: outside,
            limit: prev,
            pass: outside <= prev * (1.0 + 1e-12),
        });
    }
    Ok(outside)
}

fn interior_suite(cfg: &RunConfig, point: &SweepPoint, rows: &mut Vec<CheckRow>) -> Result<()> {
    for p in [2.0, 4.0] {
        for est in interior_estimate(&point.spectrum, &point.forms, p, cfg.margin)?.into_iter().take(cfg.n) {
            let tol = cfg.solver.tolerance * est.lambda.abs().max(1.0);
            rows.push(CheckRow {
                suite: "interior_estimate",
                alpha: point.alpha,
                n: est.n,
                detail: if est.vacuous {
                    format!("p={p}: vacuous denominator")
                } else {
                    format!("p={p}: lambda >= bound")
                },
                value: est.lambda,
                limit: est.bound.map_or(f64::NEG_INFINITY, |b| b - tol),
                pass: est.holds(tol),
            });
        }
    }
    Ok(())
}
