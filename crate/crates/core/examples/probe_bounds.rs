//! Exponential probes: energy below −α², mass concentration in caps, and the
//! deflated upper bound on the next eigenvalue.

use std::sync::Arc;

use robinlab::assembly::assemble;
use robinlab::eigen::{solve, SolverOptions};
use robinlab::mesh::{generate_mesh, DomainSpec, Point2};
use robinlab::variational::{
    cap_disjointness, caps, direction_search, ind_bound, make_probe, mass_outside_cap, probe_energy, DeflationBasis,
};

fn main() -> robinlab::Result<()> {
    let alpha = 20.0;
    let mesh = Arc::new(generate_mesh(&DomainSpec::unit_disk(0.025))?);
    let forms = assemble(mesh.clone(), None)?;

    let d = Point2::unit(0.3);
    let probe = make_probe(&mesh, alpha, d)?;
    println!("probe energy {:.3} <= -alpha^2 = {}", probe_energy(&probe), -alpha * alpha);

    let kappa_d = caps(&mesh, d, &[f64::INFINITY])?[0].kappa_d;
    for depth in [0.05, 0.1, 0.2, 0.4] {
        let cap = caps(&mesh, d, &[kappa_d - depth])?.remove(0);
        println!(
            "cap depth {depth:4}: {:4} triangles, probe mass outside {:.3e}",
            cap.triangles.len(),
            mass_outside_cap(&probe, &cap)?
        );
    }
    println!("caps for d and -d stay disjoint up to eps = {:.3}", cap_disjointness(&mesh, d, d * -1.0)?);

    let spectrum = solve(&forms, alpha, &SolverOptions::with_count(4))?;
    for n in 1..=3 {
        let basis = DeflationBasis::from_spectrum(&spectrum, n, &forms)?;
        let search = direction_search(&forms, alpha, &basis, 16, 0.5)?;
        let probe = make_probe(&mesh, alpha, search.d)?;
        let b = ind_bound(&probe, &basis, &forms)?.with_next(spectrum.pairs[n].lambda);
        println!(
            "n = {n}: overlap {:.3} (success {}), bound {:.2} >= lambda_{} = {:.2}, deflated Rayleigh quotient {:.2}",
            search.overlap_sum,
            search.success,
            b.bound,
            n + 1,
            spectrum.pairs[n].lambda,
            b.rayleigh_cross_check
        );
    }
    Ok(())
}
