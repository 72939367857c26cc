use std::process::Command;

#[test]
fn output_variable_overrides_the_out_flag() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_robinlab"))
        .args(["--out", flag.path().to_str().unwrap(), "analytic", "--disk", "--alpha", "2"])
        .env(robinlab::cli::OUT_ENV, env.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(env.path().join("analytic.csv").exists());
    assert!(env.path().join("analytic.manifest.json").exists());
    assert!(!flag.path().join("analytic.csv").exists());
}
