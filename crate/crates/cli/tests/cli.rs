use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn domain(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "domains", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert-lab")).args(args).env_remove("HILBERT_LAB_THREADS").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn dist_half_log_three() {
    let d = domain("disk.json");
    let out = run(&["dist", "--domain", &d, "--p", "0,0", "--q", "0.5,0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["p_x", "p_y", "q_x", "q_y", "distance"]);
    let v: f64 = rows[1][4].parse().unwrap();
    assert!((v - 0.5493061).abs() < 1e-7);
}

#[test]
fn sphere_sweep_slope() {
    let d = domain("disk.json");
    let v = json(&["entropy", "spheres", "--domain", &d, "--rmin", "2", "--rmax", "8", "--count", "13"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["columns"], serde_json::json!(["R", "value", "log_value", "local_slope"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    let slope = v["summary"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.05, "{slope}");
    assert_eq!(v["config"]["command"]["grid"]["count"], 13);
}

#[test]
fn bounds_hold_for_p3() {
    let out = run(&["entropy", "bounds", "--p", "3", "--rmin", "0", "--rmax", "60"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 602);
    for r in &rows[1..] {
        let (lo, s, up): (f64, f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!(lo <= s && s <= up, "{r:?}");
        assert_eq!(r[5], "true");
    }
}

#[test]
fn empty_sweep_is_header_only() {
    let d = domain("disk.json");
    let out = run(&["entropy", "spheres", "--domain", &d, "--rmin", "2", "--rmax", "8", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "R,value,log_value,local_slope\n");
}

#[test]
fn byte_identical_reruns_across_thread_counts() {
    let d = domain("square.json");
    let args = ["--format", "json", "entropy", "balls", "--domain", &d, "--rmin", "1", "--rmax", "3", "--count", "6"];
    let a = run(&args);
    let b = run(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_hilbert-lab")).args(args).env("HILBERT_LAB_THREADS", "1").output().unwrap();
    assert!(a.status.success() && c.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn exit_codes() {
    let d = domain("disk.json");
    assert_eq!(run(&["dist", "--domain", &d, "--p", "2,0", "--q", "0,0"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "--domain", "missing.json", "--p", "0,0", "--q", "0,0"]).status.code(), Some(2));
    assert_eq!(run(&["--quad-tol", "0.5", "sigma", "--domain", &d]).status.code(), Some(2));
    assert_eq!(run(&["entropy", "spheres", "--domain", &d, "--rmin", "1", "--rmax", "2", "--count", "3"]).status.code(), Some(2));
    assert_eq!(run(&["cantor", "domain", "--p", "1000", "--depth", "22"]).status.code(), Some(3));
    let bad = Command::new(env!("CARGO_BIN_EXE_hilbert-lab"))
        .args(["dist", "--domain", &d, "--p", "0,0", "--q", "0,0"])
        .env("HILBERT_LAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn radial_spec_round_trip() {
    let dir = std::env::temp_dir().join(format!("hilbert-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("cantor_radial.json");
    let out = run(&["cantor", "domain", "--p", "3", "--depth", "8", "--radial-grid", "512", "-o", spec.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&["sigma", "--domain", spec.to_str().unwrap()]);
    assert!(v["rows"][0][3].as_f64().unwrap() > 0.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tree_commands() {
    let v = json(&["tree", "check", "--p", "3", "--depth", "8"]);
    assert_eq!(v["rows"][0][1], true);
    let v = json(&["tree", "embed", "--p-src", "5", "--p-tgt", "3", "--depth", "6"]);
    assert_eq!(v["summary"]["order_preserved"], true);
    assert!((v["summary"]["distortion"]["distortion"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    let v = json(&["tree", "embed", "--p-src", "3", "--depth", "5", "--method", "reverse", "--reorder"]);
    assert_eq!(v["summary"]["order_preserved_before_flips"], false);
    assert_eq!(v["summary"]["order_preserved"], true);
    assert_eq!(v["summary"]["flips"]["isometry_preserved"], true);
    let v = json(&["tree", "extend", "--depth", "4", "--count", "33"]);
    let f: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r[1].as_f64().unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1] > w[0]));
    let v = json(&["tree", "dist", "--depth", "6", "--x", "0", "--y", "1"]);
    assert_eq!(v["rows"][0][2], 1.0);
}

#[test]
fn cantor_tables() {
    let v = json(&["cantor", "fn", "--p", "3", "--depth", "20", "--count", "3"]);
    assert_eq!(v["rows"][1][1], 0.5);
    let v = json(&["cantor", "measure", "--p", "3", "--depth", "6", "--level", "3"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| (r[3].as_f64().unwrap() - 0.125).abs() < 1e-15));
}
