//! Run the bundled inequality checks programmatically and through the
//! command-line entry point.

use robinlab::cli::{run, run_verify, DomainKind, RunConfig};

fn main() -> robinlab::Result<()> {
    let mut cfg = RunConfig { alphas: vec![5.0, 10.0], n: 2, ..RunConfig::default() };
    cfg.domain.kind = DomainKind::Disk;
    let report = run_verify(&cfg)?;
    print!("{}", report.table());

    let out = std::env::temp_dir().join("robinlab-verify-example");
    let code = run([
        "robinlab",
        "verify",
        "--domain",
        "square",
        "--alphas",
        "5,20",
        "--n",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    println!("exit code {code}; reports in {}", out.display());
    Ok(())
}
