use std::path::Path;
use std::process::Command;

use robinlab::cli::{run, EXIT_INVALID, EXIT_OK, EXIT_SOLVER};
use robinlab::report::read_config_hash;
use serde_json::Value;

fn robinlab(args: &[&str], out: &Path) -> i32 {
    let mut full = vec!["robinlab", "--out", out.to_str().unwrap()];
    full.extend_from_slice(args);
    run(full)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn binary_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let status = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_robinlab"))
            .args(args)
            .env("ROBINLAB_OUT", dir.path())
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(status(&["analytic", "--disk", "--alpha", "1.5"]), Some(EXIT_OK));
    assert_eq!(status(&["no-such-command"]), Some(EXIT_INVALID));
    assert_eq!(status(&["solve", "--alpha", "1", "--mesh", "/nonexistent/mesh.txt"]), Some(EXIT_INVALID));
}

#[test]
fn mesh_writes_a_loadable_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("disk.mesh");
    assert_eq!(
        robinlab(&["mesh", "--domain", "disk", "--h", "0.2", "--output", file.to_str().unwrap()], dir.path()),
        EXIT_OK
    );
    let mesh = robinlab::mesh::Mesh::load(&file).unwrap();
    mesh.check_invariants().unwrap();
    assert!((mesh.area() - std::f64::consts::PI).abs() < 0.1);
}

#[test]
fn bad_polygons_are_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let bowtie = ["mesh", "--domain", "polygon", "--vertices", "0,0;1,1;1,0;0,1", "--h", "0.2"];
    assert_eq!(robinlab(&bowtie, dir.path()), EXIT_INVALID);
    let flat = ["mesh", "--domain", "polygon", "--vertices", "0,0;1,0;2,0", "--h", "0.2"];
    assert_eq!(robinlab(&flat, dir.path()), EXIT_INVALID);
    assert_eq!(robinlab(&["mesh", "--domain", "square", "--h=-1"], dir.path()), EXIT_INVALID);
}

#[test]
fn solve_at_zero_alpha_recovers_the_neumann_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(robinlab(&["solve", "--alpha", "0", "--n", "2", "--h", "0.1", "--eigenvectors"], dir.path()), EXIT_OK);
    let spec = json(&dir.path().join("spectrum.json"));
    let first = spec["pairs"][0]["lambda"].as_f64().unwrap();
    assert!(first.abs() < 1e-10, "{first}");
    assert!(dir.path().join("eigenvector_1.txt").exists());
    assert!(dir.path().join("solve.manifest.json").exists());
}

#[test]
fn solver_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "--alpha", "5", "--n", "3", "--h", "0.05", "--dense-threshold", "0", "--max-iterations", "1"];
    assert_eq!(robinlab(&args, dir.path()), EXIT_SOLVER);
}

#[test]
fn analytic_writes_the_disk_branches() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(robinlab(&["analytic", "--disk", "--alpha", "4.5"], dir.path()), EXIT_OK);
    let text = std::fs::read_to_string(dir.path().join("analytic.csv")).unwrap();
    assert_eq!(robinlab::report::csv_body(&text).lines().count(), 1 + 5);
    assert_eq!(robinlab(&["analytic", "--alpha", "4.5"], dir.path()), EXIT_INVALID);
}

#[test]
fn bound_reports_a_certified_upper_bound() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(robinlab(&["bound", "--domain", "disk", "--alpha", "10", "--n", "2"], dir.path()), EXIT_OK);
    let b = json(&dir.path().join("bound.json"));
    let (bound, next) = (b["bound"].as_f64().unwrap(), b["lambda_next"].as_f64().unwrap());
    assert!(bound >= next, "{bound} < {next}");
    assert_eq!(b["overlaps"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_and_concentration_share_a_hash_only_with_equal_configs() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["--domain", "disk", "--alphas", "5,10", "--n", "2"];
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(robinlab(&[&["sweep"][..], &common].concat(), &a), EXIT_OK);
    assert_eq!(robinlab(&[&["concentration"][..], &common].concat(), &b), EXIT_OK);
    let sweep = a.join("sweep.csv");
    let conc = b.join("concentration.csv");
    // Same parameters, different output folders: the hash ignores `out`.
    assert_eq!(read_config_hash(&sweep).unwrap(), read_config_hash(&conc).unwrap());

    let c = dir.path().join("c");
    assert_eq!(robinlab(&["sweep", "--domain", "disk", "--alphas", "5,20", "--n", "2"], &c), EXIT_OK);
    let other = c.join("sweep.csv");
    assert_ne!(read_config_hash(&sweep).unwrap(), read_config_hash(&other).unwrap());

    let v = dir.path().join("v");
    let inputs = [sweep.to_str().unwrap(), other.to_str().unwrap()];
    assert_eq!(robinlab(&[&["verify"][..], &common, &["--inputs"], &inputs].concat(), &v), EXIT_INVALID);
    assert!(!v.join("verify.csv").exists());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"domain": {"kind": "disk", "h": 0.2}, "alpha": 3.0, "n": 1}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(robinlab(&["--config", cfg, "solve", "--n", "2"], dir.path()), EXIT_OK);
    let spec = json(&dir.path().join("spectrum.json"));
    assert_eq!(spec["pairs"].as_array().unwrap().len(), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"alpah": 3.0}"#).unwrap();
    assert_eq!(robinlab(&["--config", bad.to_str().unwrap(), "solve"], dir.path()), EXIT_INVALID);
}
