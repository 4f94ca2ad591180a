use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kakeya_cli::schema::{parse, ConfigDoc, Configuration, GenDoc};
use kakeya_core::generators::generate;

const BIN: &str = env!("CARGO_BIN_EXE_kakeya");

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn kakeya(args: &[&str], threads: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env("KAKEYA_THREADS", threads)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const GEN: &str =
    r#"{"n":2,"counts":[3,4],"regime":{"kind":"small_angle","delta":0.1},"cube":{"min_corner":[0,0],"side":12}}"#;

#[test]
fn gen_round_trips_through_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = write(dir.path(), "gen.json", GEN);
    let out = dir.path().join("cfg.json");
    let o = kakeya(
        &[
            "gen",
            "--config",
            spec_path.to_str().unwrap(),
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ],
        "1",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let parsed = parse::<ConfigDoc>("cfg.json", &text)
        .unwrap()
        .to_configuration()
        .unwrap();
    let spec = parse::<GenDoc>("gen.json", GEN).unwrap().to_spec(Some(42)).unwrap();
    let expected = Configuration {
        cube: spec.cube.clone(),
        families: generate(&spec).unwrap(),
    };
    assert_eq!(parsed, expected);
    let again = serde_json::to_string_pretty(&ConfigDoc::from_configuration(&parsed)).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn curves_and_weights_round_trip() {
    let text = r#"{"schema_version":1,"n":2,"cube":{"min_corner":[0,0],"side":4},
      "families":[
        {"axis":0,"radius":1,"members":[{"polyline":{"breakpoints":[0,2,4],"values":[[1],[1.1],[1.05]],"lip":0.05},"weight":2.5}]},
        {"axis":1,"radius":1,"members":[{"anchor":[2,0],"dir":[0,3]}]}]}"#;
    let cfg = parse::<ConfigDoc>("x", text).unwrap().to_configuration().unwrap();
    let doc = ConfigDoc::from_configuration(&cfg);
    assert_eq!(doc.families[1].members[0].dir, Some(vec![0.0, 1.0]));
    assert_eq!(doc.families[1].members[0].weight, 1.0);
    let back = parse::<ConfigDoc>("y", &serde_json::to_string(&doc).unwrap())
        .unwrap()
        .to_configuration()
        .unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", "{\"n\": 2,\n  \"counts\": [1,,]}");
    let o = kakeya(&["gen", "--config", p.to_str().unwrap()], "1");
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json:2:"), "{err}");
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "gen.json", GEN);
    let cfg = dir.path().join("cfg.json");
    kakeya(
        &["gen", "--config", p.to_str().unwrap(), "--out", cfg.to_str().unwrap()],
        "1",
    );
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&kakeya(&["certify", "--config", c, "--delta", "1.5"], "1")), 1);
    assert_eq!(code(&kakeya(&["certify", "--config", c], "1")), 1);
    assert_eq!(code(&kakeya(&["eval", "--config", c, "--format", "csv"], "1")), 1);
    assert_eq!(code(&kakeya(&["eval"], "1")), 1);
}

#[test]
fn cell_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "gen.json", GEN);
    let cfg = dir.path().join("cfg.json");
    kakeya(
        &["gen", "--config", p.to_str().unwrap(), "--out", cfg.to_str().unwrap()],
        "1",
    );
    let o = kakeya(&["eval", "--config", cfg.to_str().unwrap(), "--grid", "20000"], "1");
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cell budget"));
}

#[test]
fn certify_then_eval_is_sound() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "gen.json", GEN);
    let cfg = dir.path().join("cfg.json");
    kakeya(
        &[
            "gen",
            "--config",
            p.to_str().unwrap(),
            "--seed",
            "3",
            "--out",
            cfg.to_str().unwrap(),
        ],
        "1",
    );
    let c = cfg.to_str().unwrap();
    let cert = kakeya(&["certify", "--config", c, "--epsilon", "5", "--check"], "2");
    assert_eq!(code(&cert), 0, "{}", String::from_utf8_lossy(&cert.stderr));
    let cert: serde_json::Value = serde_json::from_slice(&cert.stdout).unwrap();
    assert_eq!(cert["check"]["sound"], true);
    let eval = kakeya(&["eval", "--config", c, "--tol", "0.02"], "2");
    let eval: serde_json::Value = serde_json::from_slice(&eval.stdout).unwrap();
    assert!(eval["value"].as_f64().unwrap() <= cert["final_bound"].as_f64().unwrap());
}

#[test]
fn lw_product_functions_give_equality() {
    // In the plane the inequality is an identity for any f_0, f_1.
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "lw.json",
        r#"{"lo":[0,0],"hi":[1,1],"functions":[
            {"lo":[0],"hi":[1],"cells":[2],"values":[1,3]},
            {"lo":[0],"hi":[1],"cells":[2],"values":[2,0.5]}]}"#,
    );
    let o = kakeya(&["verify-lw", "--config", p.to_str().unwrap(), "--grid", "8"], "1");
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert!((v["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn csv_outputs_have_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = write(
        dir.path(),
        "sweep.json",
        r#"{"template":{"n":2,"counts":[2,2],"regime":{"kind":"axis_parallel"},"cube":{"min_corner":[0,0],"side":10}},"scales":[10,20]}"#,
    );
    let o = kakeya(
        &[
            "sweep",
            "--config",
            sweep.to_str().unwrap(),
            "--delta",
            "0.1",
            "--tol",
            "0.05",
            "--format",
            "csv",
        ],
        "1",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "s,value,error_estimate,cells_per_side,convergence,bound,ratio,sound"
    );
    assert_eq!(text.lines().count(), 3);

    let search = write(
        dir.path(),
        "search.json",
        r#"{"n":2,"counts":[2,2],"cube":{"min_corner":[0,0],"side":8},"budget":6,"restarts":2}"#,
    );
    let o = kakeya(
        &[
            "search",
            "--config",
            search.to_str().unwrap(),
            "--grid",
            "16",
            "--format",
            "csv",
        ],
        "1",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "restart,iteration,proposed,accepted,current,best"
    );
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn reduce_covers_general_configurations() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "gen.json",
        r#"{"n":2,"counts":[3,3],"regime":{"kind":"general"},"cube":{"min_corner":[0,0],"side":10}}"#,
    );
    let cfg = dir.path().join("cfg.json");
    kakeya(
        &["gen", "--config", p.to_str().unwrap(), "--out", cfg.to_str().unwrap()],
        "1",
    );
    let o = kakeya(
        &[
            "reduce",
            "--config",
            cfg.to_str().unwrap(),
            "--delta",
            "0.02",
            "--check",
        ],
        "4",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["problems"].as_array().unwrap().is_empty());
    assert_eq!(v["check"]["sound"], true);
}
