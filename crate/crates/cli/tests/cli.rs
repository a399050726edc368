use std::process::{Command, Output};

fn latinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latinlab")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = latinlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn construct_and_count() {
    let dir = std::env::temp_dir().join(format!("latinlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("b3.txt");
    stdout(&["construct", "--boolean", "3", "--out", file.to_str().unwrap()]);
    let stats = json(&["count", file.to_str().unwrap()]);
    assert_eq!(stats["N"], 112);
    let cyclic = stdout(&["construct", "--cyclic", "5"]);
    assert!(cyclic.starts_with("5\n1 2 3 4 5\n"));
    assert!(!latinlab(&["construct", "--intercalate-free", "4"]).status.success());
}

#[test]
fn sample_is_reproducible() {
    let a = stdout(&["sample", "--n", "7", "--seed", "3", "--samples", "2"]);
    let b = stdout(&["sample", "--n", "7", "--seed", "3", "--samples", "2"]);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 16);
}

#[test]
fn enumerate_totals() {
    assert_eq!(stdout(&["enumerate", "--n", "4"]), "576\n");
    assert_eq!(stdout(&["enumerate", "--n", "5", "--k", "2"]), "5280\n");
}

#[test]
fn experiment_outputs() {
    let rep = json(&["experiment", "--n", "4", "--exhaustive", "--delta", "1"]);
    assert_eq!(rep["schema"], "latinlab/1");
    assert_eq!(rep["mean"], 6.0);
    assert_eq!(rep["tails"].as_array().unwrap().len(), 2);
    let csv = stdout(&["experiment", "--n", "4", "--exhaustive", "--format", "csv"]);
    assert_eq!(csv, "value,count\n4,432\n12,144\n");
}

#[test]
fn trp_gstar_and_bounds() {
    let run = json(&["trp", "--n", "8", "--m", "20", "--seed", "1"]);
    assert_eq!(run["removed"].as_array().unwrap().len(), 20);
    let csv = stdout(&["trp", "--n", "8", "--m", "5", "--trace", "--h", "2", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "step,edges,triangles,deviation");
    assert_eq!(csv.lines().count(), 7);
    let g = json(&["gstar", "--n", "12", "--alpha", "0.3", "--samples", "50"]);
    assert!(g["intercalates_gstar"]["exact"].as_f64().unwrap() > 0.0);
    assert!(!latinlab(&["gstar", "--n", "12", "--alpha", "1.5"]).status.success());
    let f = json(&["bounds", "freedman", "--lipschitz", "1", "--coords", "4", "--p", "0.5", "--t", "2"]);
    assert!((f["bound"].as_f64().unwrap() - (-1.0f64 / 3.0).exp()).abs() < 1e-12);
}

#[test]
fn switchings_and_decompose() {
    let dir = std::env::temp_dir().join(format!("latinlab-cli-sd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rect = dir.join("rect.txt");
    std::fs::write(&rect, "2 4\n1 2 3 4\n2 1 4 3\n").unwrap();
    let csv = stdout(&["switchings", "--rect", rect.to_str().unwrap()]);
    assert_eq!(csv.lines().next().unwrap(), "i,x,y,valid,delta,creates,destroys");
    assert_eq!(csv.lines().count(), 1 + 6);
    let edges = dir.join("edges.txt");
    std::fs::write(&edges, "0 1 2\n0 3 4\n0 5 6\n7 8 9\n").unwrap();
    let parts = json(&["decompose", "--edges", edges.to_str().unwrap(), "--r", "3"]);
    let parts = parts.as_array().unwrap();
    assert_eq!(parts[0]["kind"], "star");
    assert_eq!(parts[0]["center"], 0);
    assert_eq!(parts.len(), 2);
}
