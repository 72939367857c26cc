//! λ_n(α)/(−α²) along a sweep on the disk and on the square, with the mesh
//! refined so that αh ≤ 0.5.

use robinlab::asymptotics::{run_sweep, sweep_csv, SweepConfig, SweepDomain};
use robinlab::mesh::DomainSpec;

fn main() -> robinlab::Result<()> {
    let config = SweepConfig::new(vec![5.0, 10.0, 20.0, 40.0], 4);
    for (name, spec) in [("disk", DomainSpec::unit_disk(0.4)), ("square", DomainSpec::unit_square(0.4))] {
        let out = run_sweep(&config, &SweepDomain::Planar(spec))?;
        println!("{name}");
        print!("{}", sweep_csv(&out.records));
        for f in out.failures {
            println!("alpha {} failed: {}", f.alpha, f.error);
        }
    }
    let interval = run_sweep(&SweepConfig::new(vec![10.0, 50.0], 2), &SweepDomain::Interval)?;
    println!("interval");
    print!("{}", sweep_csv(&interval.records));
    Ok(())
}
