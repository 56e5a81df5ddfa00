use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn topvs(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topvs")).args(args).current_dir(dir).output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = topvs(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], dir: &Path) -> Value {
    serde_json::from_str(&ok(args, dir)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const K4: &str = "i,j,w\n0,1,1\n0,2,2\n0,3,3\n1,2,4\n1,3,5\n2,3,6\n";

/// Star weights from node 0 form the spanning tree, the triangle the cycles.
fn star_with_triangle(star: [f64; 3], triangle: [f64; 3]) -> String {
    format!(
        "i,j,w\n0,1,{}\n0,2,{}\n0,3,{}\n1,2,{}\n1,3,{}\n2,3,{}\n",
        star[0], star[1], star[2], triangle[0], triangle[1], triangle[2]
    )
}

#[test]
fn decompose_k4() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k4.csv", K4);
    let report = json(&["decompose", "k4.csv"], dir.path());
    assert_eq!(report["births"], serde_json::json!([3.0, 5.0, 6.0]));
    assert_eq!(report["deaths"], serde_json::json!([1.0, 2.0, 4.0]));
    assert_eq!(report["config"]["command"], "decompose");
}

#[test]
fn betti_k4() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k4.csv", K4);
    let text = ok(&["betti", "k4.csv", "--thresholds", "0.5,3.5,6.5"], dir.path());
    assert_eq!(text, "epsilon,beta0,beta1\n0.5,1,3\n3.5,2,1\n6.5,4,0\n");
}

#[test]
fn dist_between_two_four_node_networks() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "g1.csv", &star_with_triangle([5.0, 4.0, 3.0], [1.0, 1.5, 2.0]));
    write(dir.path(), "g2.csv", &star_with_triangle([3.0, 2.5, 2.0], [0.5, 1.0, 1.5]));
    let report = json(&["dist", "--p", "1", "g1.csv", "g2.csv"], dir.path());
    assert!((report["w_births"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((report["w_deaths"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((report["d_product"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert_eq!(report["ref_size"], 4);

    let inf = json(&["dist", "--p", "inf", "g1.csv", "g2.csv"], dir.path());
    assert!((inf["d_product"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = topvs(&["decompose", "absent.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.csv"));
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k4.csv", K4);
    for args in [
        &["dist", "--p", "0.5", "k4.csv", "k4.csv"][..],
        &["simulate", "--nodes", "10", "--modules", "3"],
        &["simulate", "--r", "1.5"],
        &["dist", "--ref-size", "3", "k4.csv", "k4.csv"],
        &["frobnicate"],
    ] {
        let out = topvs(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_lists_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let expected: &[(&str, &[&str])] = &[
        ("dist", &["--p <P>", "[default: 2]", "--format", "[default: auto]"]),
        ("simulate", &["[default: 90]", "[default: 3]", "[default: 0.75]", "[default: 0]"]),
        ("simulate-benchmark", &["[default: 3,5]", "[default: 30]"]),
        ("classify", &["--outer", "[default: 2]", "[default: 5]", "[default: 0.01,1,100]", "--standardize"]),
        ("permtest", &["--trials", "[default: 1000]", "--seed"]),
        ("betti", &["--thresholds"]),
        ("embed", &["--manifest", "--ref-size"]),
        ("mean", &["--label"]),
        ("decompose", &["--node-count", "--out"]),
    ];
    for (command, needles) in expected {
        let text = ok(&[command, "--help"], dir.path());
        for needle in *needles {
            assert!(text.contains(needle), "{command} --help lacks {needle}:\n{text}");
        }
    }
}

#[test]
fn benchmark_pipeline_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let manifest = ok(&["simulate-benchmark", "--sizes", "30,45", "--per-group", "6", "--r", "0.8", "--seed", "3", "--out-dir", "bench"], d);
    assert!(manifest.trim().ends_with("manifest.json"));
    let entries: Value = serde_json::from_str(&std::fs::read_to_string(d.join("bench/manifest.json")).unwrap()).unwrap();
    assert_eq!(entries.as_array().unwrap().len(), 24);

    let classify = |threads: &str| ok(&["--threads", threads, "classify", "--manifest", "bench/manifest.json", "--seed", "1"], d);
    let one = classify("1");
    assert_eq!(one, classify("4"));
    let report: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(report["ref_size"], 45);
    assert_eq!(report["config"]["args"]["seed"], 1);
    assert!(report["accuracy"].as_f64().unwrap() >= 0.5);

    let permtest = |threads: &str| ok(&["--threads", threads, "permtest", "--manifest", "bench/manifest.json", "--trials", "12"], d);
    assert_eq!(permtest("1"), permtest("3"));

    let embed = ok(&["embed", "--manifest", "bench/manifest.json"], d);
    let header = embed.lines().next().unwrap();
    assert!(header.starts_with("label,ref_size,b_1,"));
    assert_eq!(header.split(',').count(), 2 + 44 + 1 + 45 * 42 / 2);
    assert_eq!(embed.lines().count(), 25);

    let mean = json(&["mean", "--manifest", "bench/manifest.json", "--label", "L1"], d);
    assert_eq!(mean["births"].as_array().unwrap().len(), 44);
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--nodes", "12", "--modules", "3", "--r", "0.65", "--seed", "7"];
    let a = ok(&args, dir.path());
    assert_eq!(a, ok(&args, dir.path()));
    write(dir.path(), "net.csv", &a);
    let report = json(&["decompose", "net.csv"], dir.path());
    assert_eq!(report["births"].as_array().unwrap().len(), 11);
    assert_eq!(report["deaths"].as_array().unwrap().len(), 55);
}
