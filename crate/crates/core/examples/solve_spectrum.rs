//! Lowest Robin eigenvalues of the disk compared with the Bessel branches.

use std::sync::Arc;

use robinlab::analytic::{disk_eigenvalues_with_multiplicity, disk_negative_spectrum};
use robinlab::assembly::assemble;
use robinlab::eigen::{negative_count, solve, SolverOptions};
use robinlab::mesh::{generate_mesh, DomainSpec};

fn main() -> robinlab::Result<()> {
    let alpha = 4.5;
    let mesh = Arc::new(generate_mesh(&DomainSpec::unit_disk(0.025))?);
    let forms = assemble(mesh, None)?;
    let spectrum = solve(&forms, alpha, &SolverOptions::with_count(12))?;
    let exact = disk_eigenvalues_with_multiplicity(&disk_negative_spectrum(alpha, 6)?);

    println!("{:?} solve, shift {:?}", spectrum.method, spectrum.shift);
    for (i, p) in spectrum.pairs.iter().enumerate() {
        let reference = exact.get(i).map_or(String::from("-"), |e| format!("{e:.4}"));
        println!("lambda_{:<2} {:12.4}   bessel {:>10}   residual {:.1e}", i + 1, p.lambda, reference, p.residual);
    }
    println!("clusters: {:?}", spectrum.clusters);
    let count = negative_count(&spectrum)?;
    println!("negative eigenvalues: {} with multiplicity, {} distinct", count.with_multiplicity, count.distinct);
    Ok(())
}
