//! Robin condition with a variable weight b: the ratio normalized by
//! max b² stays at or below one.

use robinlab::asymptotics::{weighted_limsup_check, SweepConfig};
use robinlab::mesh::{DomainSpec, Point2};

fn main() -> robinlab::Result<()> {
    let config = SweepConfig::new(vec![10.0, 20.0, 40.0], 3);
    let weight = |p: Point2| 1.0 + 0.5 * p.x / p.norm();
    let report = weighted_limsup_check(&config, &DomainSpec::unit_disk(0.4), &weight, 0.05)?;
    println!("max weight {:.6}", report.max_weight);
    for r in &report.rows {
        println!(
            "alpha {:4} n {}: lambda {:10.3} ratio {:.4} normalized {:.4}",
            r.alpha, r.n, r.lambda, r.ratio, r.normalized_ratio
        );
    }
    println!(
        "worst normalized ratio at alpha {}: {:.4} (passed: {})",
        report.largest_alpha, report.worst_at_largest, report.passed
    );
    Ok(())
}
