//! Closed-form reference spectra: disk branches, the interval, and the
//! half-space eigenfunction.

use robinlab::analytic::{disk_csv, disk_negative_spectrum, halfspace_check, interval_negative_spectrum};

fn main() -> robinlab::Result<()> {
    for alpha in [1.5, 4.5, 9.5] {
        let branches = disk_negative_spectrum(alpha, alpha.ceil() as u32 + 1)?;
        println!("disk, alpha = {alpha}: {} negative branches", branches.len());
    }
    print!("{}", disk_csv(&disk_negative_spectrum(4.5, 6)?));

    // √(−λ) − α stays bounded as α grows.
    for alpha in [10.0, 20.0, 40.0, 80.0] {
        let b = disk_negative_spectrum(alpha, alpha as u32 + 1)?;
        let gaps: Vec<String> = b.iter().take(5).map(|b| format!("{:+.4}", b.mu - alpha)).collect();
        println!("alpha {alpha:4}: mu - alpha for m = 0..4: {}", gaps.join(" "));
    }

    for b in interval_negative_spectrum(10.0)? {
        println!("interval {:?}: mu {:.10} lambda {:.8}", b.kind, b.mu, b.lambda);
    }

    let hs = halfspace_check(3.0, 0.05)?;
    println!(
        "half-space e^(alpha x): lambda {} residuals {:.2e} -> {:.2e}, observed order {:.2}",
        hs.lambda, hs.residual_coarse, hs.residual_fine, hs.observed_order
    );
    Ok(())
}
