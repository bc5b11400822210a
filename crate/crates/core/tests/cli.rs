//! The `sublevel` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use sublevel_barcodes::io::{load_cloud_csv, load_diagram_json};

fn sublevel(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublevel"))
        .args(args)
        .current_dir(dir)
        .env_remove("BARCODE_THREADS")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = sublevel(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn barcode_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["--seed", "3", "barcode", "--function", "langermann", "--n", "20000", "--edges-out"];
    ok(d, &[&["--out", "a.json"][..], &args, &["ea.csv", "--pairs-out", "pa.csv"]].concat());
    ok(d, &[&["--out", "b.json"][..], &args, &["eb.csv", "--pairs-out", "pb.csv"]].concat());
    for (x, y) in [("a.json", "b.json"), ("ea.csv", "eb.csv"), ("pa.csv", "pb.csv")] {
        assert_eq!(std::fs::read(d.join(x)).unwrap(), std::fs::read(d.join(y)).unwrap(), "{x}");
    }
    assert_eq!(ok(d, &["bottleneck", "a.json", "b.json"]).trim(), "0");
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["barcode", "--function", "alpine01", "--dim", "3", "--n", "5000", "--graph-method", "knn"];
    ok(d, &[&["--threads", "1", "--out", "one.json"][..], &args].concat());
    let out = Command::new(env!("CARGO_BIN_EXE_sublevel"))
        .args([&["--threads", "1", "--out", "env.json"][..], &args].concat())
        .current_dir(d)
        .env("BARCODE_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(d.join("one.json")).unwrap(), std::fs::read(d.join("env.json")).unwrap());
}

#[test]
fn sampled_points_feed_back_into_barcode() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--seed", "9", "--out", "pts.csv", "sample", "--function", "wavy", "--n", "3000"]);
    let cloud = load_cloud_csv(&d.join("pts.csv"), None, None).unwrap();
    assert_eq!(cloud.cloud.len(), 3000);
    assert!(cloud.values.is_some());

    ok(d, &["--seed", "9", "--out", "direct.json", "barcode", "--function", "wavy", "--n", "3000"]);
    ok(d, &["--out", "column.json", "barcode", "--points", "pts.csv", "--values-column", "f", "--box=-3.141592653589793:3.141592653589793,-3.141592653589793:3.141592653589793"]);
    ok(d, &["--out", "eval.json", "barcode", "--points", "pts.csv", "--function", "wavy"]);
    ok(d, &["--out", "oracle.json", "oracle-barcode", "--points", "pts.csv", "--function", "wavy", "--degree1-out", "cycles.csv"]);
    let direct = load_diagram_json(&d.join("direct.json")).unwrap();
    for other in ["column.json", "eval.json", "oracle.json"] {
        assert_eq!(load_diagram_json(&d.join(other)).unwrap(), direct, "{other}");
        assert_eq!(ok(d, &["bottleneck", "direct.json", other]).trim(), "0");
    }
    let cycles = std::fs::read_to_string(d.join("cycles.csv")).unwrap();
    assert!(cycles.lines().any(|l| l == "birth"));
}

#[test]
fn every_output_file_echoes_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--seed", "4", "--out", "d.json", "barcode", "--function", "holdertable", "--n", "2000", "--edges-out", "e.csv"]);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("d.json")).unwrap()).unwrap();
    let config = &json["config"];
    assert_eq!(config["seed"], 4);
    assert_eq!(config["function"], "holdertable");
    assert_eq!(config["graph_method"], "grid");
    assert_eq!(config["cutoff_scale"], 2.0);
    assert_eq!(config["box"], "-10:10,-10:10");
    for csv in ["e.csv", "pairs.csv"] {
        let text = std::fs::read_to_string(d.join(csv)).unwrap();
        assert!(text.starts_with("# box="), "{csv}");
        assert!(text.contains("# seed=4\n"), "{csv}");
    }
    ok(d, &["--out", "c.csv", "converge", "--function", "alpine01", "--dim", "2", "--sizes", "300,600", "--pairs", "2", "--graph-method", "grid"]);
    let text = std::fs::read_to_string(d.join("c.csv")).unwrap();
    assert!(text.contains("# pairs=2\n") && text.contains("n,mean,stderr\n") && text.contains("# slope_upper_half="));
}

#[test]
fn single_point_gives_one_infinite_bar() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["barcode", "--function", "humpcamel6", "--n", "1"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    let bars = json["bars"].as_array().unwrap();
    assert_eq!(bars.len(), 1);
    assert!(bars[0]["death"].is_null());
}

#[test]
fn langermann_constants_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("one.json"), r#"{"a": [5.0], "b": [5.0], "c": [1.0]}"#).unwrap();
    let args = ["barcode", "--function", "langermann", "--n", "4000"];
    let custom = ok(d, &[&args[..], &["--langermann-params", "one.json"]].concat());
    let standard = ok(d, &args);
    let custom: serde_json::Value = serde_json::from_str(&custom).unwrap();
    let standard: serde_json::Value = serde_json::from_str(&standard).unwrap();
    assert_eq!(custom["config"]["langermann"]["a"], serde_json::json!([5.0]));
    assert_eq!(standard["config"]["langermann"]["c"], serde_json::json!([1.0, 2.0, 5.0, 2.0, 3.0]));
    assert_ne!(custom["bars"], standard["bars"]);

    let wrong = sublevel(d, &["barcode", "--function", "wavy", "--n", "10", "--langermann-params", "one.json"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn converge_with_equal_seeds_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["converge", "--function", "alpine01", "--dim", "3", "--sizes", "1000", "--pairs", "1", "--same-seed"]);
    let row = out.lines().find(|l| l.starts_with("1000,")).unwrap();
    assert_eq!(row, "1000,0,0");
}

#[test]
fn bottleneck_prints_inf_for_mismatched_components() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("one.json"), r#"{"bars":[{"birth":0,"death":null,"min_vertex":0,"saddle_vertex":null}]}"#).unwrap();
    std::fs::write(d.join("two.json"), r#"{"bars":[{"birth":0,"death":null,"min_vertex":0,"saddle_vertex":null},{"birth":1,"death":null,"min_vertex":1,"saddle_vertex":null}]}"#).unwrap();
    assert_eq!(ok(d, &["bottleneck", "one.json", "two.json"]).trim(), "inf");
}

#[test]
fn nn_reports_range_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--out", "nn.json", "nn", "--arch", "2", "--n", "3000", "--pairs-out", "p.csv"]);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("nn.json")).unwrap()).unwrap();
    let report = &json["report"];
    assert!(report["max_value"].as_f64().unwrap() > report["highest_finite_death"].as_f64().unwrap());
    assert_eq!(json["config"]["graph_method"], "knn");
    assert_eq!(json["config"]["k"], 14);
    assert_eq!(report["n_params"], 7);
}

#[test]
fn errors_name_the_stage_and_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: [(&[&str], i32, &str); 5] = [
        (&["barcode", "--function", "nosuch", "--n", "10"], 2, "config stage"),
        (&["sample", "--box", "1:0", "--n", "3"], 2, "config stage"),
        (&["barcode", "--function", "wavy", "--n", "10", "--graph-method", "knn", "--k", "10"], 2, "graph stage"),
        (&["barcode", "--points", "missing.csv", "--function", "wavy"], 2, "io stage"),
        (&["barcode", "--points", "bad.csv"], 3, "non-finite"),
    ];
    std::fs::write(d.join("bad.csv"), "x0,f\n0.5,1\n0.7,inf\n").unwrap();
    for (args, code, message) in cases {
        let out = sublevel(d, args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(message), "{args:?}");
    }
    assert_eq!(sublevel(d, &["frobnicate"]).status.code(), Some(2));
}
