//! Eigenfunctions leave the interior as α grows: interior L² mass, global L¹
//! and L⁴ norms, and the interior lower bound from a tent cutoff.

use robinlab::asymptotics::{concentration, interior_estimate, solve_sweep_points, SweepConfig};
use robinlab::mesh::DomainSpec;

fn main() -> robinlab::Result<()> {
    let config = SweepConfig::new(vec![5.0, 10.0, 20.0, 40.0], 3);
    println!("alpha  n  interior L2 mass   ||psi||_1  ||psi||_4   lambda     interior bound");
    for (alpha, point) in solve_sweep_points(&config, &DomainSpec::unit_disk(0.4), None)? {
        let point = point?;
        let conc = concentration(&point.spectrum, &point.forms, 2.0, 1.0, 4.0, 0.5)?;
        let est = interior_estimate(&point.spectrum, &point.forms, 2.0, 0.5)?;
        for (c, e) in conc.iter().zip(&est).take(3) {
            let bound = e.bound.map_or("vacuous".to_string(), |b| format!("{b:.2}"));
            println!(
                "{alpha:5} {:2}  {:14.3e}   {:9.4}  {:9.4}  {:9.2}  {bound}",
                c.n,
                c.interior_p.powi(2),
                c.global_q,
                c.global_r,
                e.lambda
            );
        }
    }
    Ok(())
}
