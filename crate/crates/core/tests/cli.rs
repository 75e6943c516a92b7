//! The `tortile` binary end to end: files in, JSON or SVG out, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const K3: &str = r#"{"vertices":["v1","v2","v3"],"edges":[
    {"tail":"v1","head":"v2"},{"tail":"v2","head":"v3"},{"tail":"v1","head":"v3"}]}"#;
const P2: &str = r#"{"vertices":["u","v"],"edges":[{"tail":"u","head":"v","name":"e"}]}"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tortile")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn trees_cac_and_ideal() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.json", K3);
    let p2 = write(dir.path(), "p2.json", P2);
    let k3 = k3.to_str().unwrap();

    let trees = json(&run(&["--graph", k3, "trees"]));
    assert_eq!(trees, serde_json::json!({"spanning_trees": 3, "lattice_index": 3}));

    let cac = json(&run(&["--graph", p2.to_str().unwrap(), "cac"]));
    assert_eq!(cac.as_array().unwrap().len(), 3);

    let tree_ideal = json(&run(&["--graph", p2.to_str().unwrap(), "ideal", "--f", "0,0"]));
    assert_eq!(tree_ideal, serde_json::json!([]));
    let k3_ideal = json(&run(&["--graph", k3, "ideal", "--f", "0,0,0"]));
    assert!(!k3_ideal.as_array().unwrap().is_empty());
}

#[test]
fn locate_and_orbit_through_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.json", K3);
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"lengths":[1,2,1],"twist":[0,1,0],"a":["2","3","1/2"],"b":["5"]}"#,
    );
    let (k3, cfg) = (k3.to_str().unwrap(), cfg.to_str().unwrap());

    let located = json(&run(&["--graph", k3, "--config", cfg, "locate", "--point", "1/7,-2/7,1/7"]));
    assert_eq!(located["tiles"].as_array().unwrap().len(), 1);

    // A base point read back through `orbit` lies in Y.
    let point = run(&["--graph", k3, "--config", cfg, "point", "--f", "0,1,-1", "--n", "2"]);
    assert!(point.status.success());
    let path = write(dir.path(), "p.json", &String::from_utf8(point.stdout).unwrap());
    let orbit = json(&run(&["--graph", k3, "--config", cfg, "--window", "8", "orbit", "--point", path.to_str().unwrap()]));
    assert!(!orbit["member"].is_null(), "{orbit}");
    assert_eq!(orbit["orbit"]["n"], 2);
}

#[test]
fn render_writes_svg_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.json", K3);
    let out = dir.path().join("tiling.svg");
    let status = run(&["--graph", k3.to_str().unwrap(), "--bbox", "-1,-1,1,1", "--out", out.to_str().unwrap(), "render"]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("<polygon"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.json", K3);
    let k3 = k3.to_str().unwrap();
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["trees"]).status.code(), Some(1));
    assert_eq!(run(&["--graph", k3, "frobnicate"]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["--graph", missing.to_str().unwrap(), "trees"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"vertices":["a","b"],"edges":[]}"#);
    assert_eq!(run(&["--graph", bad.to_str().unwrap(), "trees"]).status.code(), Some(2));
    let locate = run(&["--graph", k3, "--window", "0", "locate", "--point", "1/3,1/3,-2/3"]);
    assert_eq!(locate.status.code(), Some(3));
    assert!(!locate.stderr.is_empty());
}
