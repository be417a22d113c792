//! End-to-end runs of the `bclpm` binary: JSON schemas, exit codes and the
//! documented examples.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bclpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bclpm")).current_dir(root()).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = bclpm(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
    (value, out.status.code().unwrap())
}

fn assert_schema(schema: &str, value: &Value) {
    let path = root().join("docs/schemas").join(format!("{schema}.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{} rejects {value}: {errors:?}", path.display());
}

#[test]
fn every_subcommand_matches_its_schema() {
    let runs: &[(&str, &[&str])] = &[
        ("recognize", &["recognize", "data/k4.mg"]),
        ("recognize", &["recognize", "data/w3.mg"]),
        ("recognize", &["recognize", "--via-minors", "data/w3.mg"]),
        ("recognize", &["recognize", "--via-minors", "data/k4.mg"]),
        ("recognize", &["recognize", "--per-component", "data/two_triangles.mg"]),
        ("recognize", &["--timing", "recognize", "data/k4.mg"]),
        ("circuits", &["circuits", "data/w3.mg"]),
        ("is-lpm", &["is-lpm", "data/u24.matroid"]),
        ("lpm-build", &["lpm", "build", "P=EENN", "Q=NENE"]),
        ("excluded", &["excluded", "C24", "--check-lpm"]),
        ("family-gen", &["family", "gen", "data/f4_chain.json"]),
        ("family-gen", &["family", "gen", "data/f1_g1.json"]),
        ("family-check", &["family", "check", "data/k4.mg"]),
        ("family-check", &["family", "check", "data/w3.mg"]),
        ("enumerate", &["enumerate", "--rank", "2", "--corank", "3", "--dedupe"]),
        ("crosscheck", &["crosscheck", "--max-edges", "4"]),
        ("bench", &["bench", "recognize", "--family", "F4", "--blocks", "10", "--repeats", "2"]),
        ("error", &["recognize", "data/two_triangles.mg"]),
        ("error", &["enumerate", "--rank", "6", "--corank", "6"]),
    ];
    for (schema, args) in runs {
        let (value, _) = json_of(args);
        assert_schema(schema, &value);
    }
}

#[test]
fn k4_example_reports_family_f0() {
    let (v, code) = json_of(&["recognize", "data/k4.mg"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["route"], "family");
    assert_eq!(v["family"], "F0");
}

#[test]
fn excluded_b1_is_not_an_lpm() {
    let (v, code) = json_of(&["excluded", "B1", "--check-lpm"]);
    assert_eq!(code, 0);
    assert_eq!(v["is_lpm"], false);
}

#[test]
fn excluded_output_round_trips_through_the_minor_route() {
    let dir = std::env::temp_dir().join(format!("bclpm-roundtrip-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["C24", "W3", "A3", "R3", "R4", "D4", "B1", "S1"] {
        let out = bclpm(&["excluded", name]);
        assert!(out.status.success());
        let file = dir.join(format!("{name}.mg"));
        std::fs::write(&file, &out.stdout).unwrap();
        let (v, code) = json_of(&["recognize", "--via-minors", file.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], "no", "{name}");
        assert_eq!(v["excluded"], name);
        let embedding = &v["certificate"]["embedding"];
        assert_eq!(embedding["delete"], serde_json::json!([]), "{name}");
        assert_eq!(embedding["contract"], serde_json::json!([]), "{name}");
        for (k, image) in embedding["map"].as_object().unwrap() {
            assert_eq!(k.parse::<u64>().unwrap(), image.as_u64().unwrap(), "{name}");
        }
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn crosscheck_to_six_edges_has_no_disagreements() {
    let (v, code) = json_of(&["crosscheck", "--max-edges", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["disagreements"], serde_json::json!([]));
    assert_eq!(v["agreements"], v["checked"]);
}

#[test]
fn crosscheck_output_ignores_the_worker_count() {
    let one = bclpm(&["--json", "--threads", "1", "crosscheck", "--max-edges", "5"]);
    let four = bclpm(&["--json", "--threads", "4", "crosscheck", "--max-edges", "5"]);
    assert_eq!(one.stdout, four.stdout);
    let one = bclpm(&["--threads", "1", "enumerate", "--rank", "3", "--corank", "3", "--dedupe"]);
    let four = bclpm(&["--threads", "4", "enumerate", "--rank", "3", "--corank", "3", "--dedupe"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn exit_codes_separate_usage_parse_and_budget() {
    assert_eq!(bclpm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bclpm(&["recognize"]).status.code(), Some(2));
    assert_eq!(bclpm(&["lpm", "build", "P=EEXN", "Q=NENE"]).status.code(), Some(3));
    assert_eq!(bclpm(&["excluded", "K5"]).status.code(), Some(3));
    assert_eq!(bclpm(&["crosscheck", "--max-edges", "12"]).status.code(), Some(4));
    assert_eq!(bclpm(&["recognize", "--via-minors", "--max-edges", "3", "data/k4.mg"]).status.code(), Some(4));
    assert_eq!(bclpm(&["recognize", "data/two_triangles.mg"]).status.code(), Some(1));
    // a "no" verdict is a successful run
    assert_eq!(bclpm(&["recognize", "data/w3.mg"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic_without_timing() {
    for args in [&["--json", "recognize", "data/k4.mg"][..], &["--json", "circuits", "data/k4.mg"][..]] {
        assert_eq!(bclpm(args).stdout, bclpm(args).stdout);
    }
}

#[test]
fn schemas_reject_mismatched_payloads() {
    let path = root().join("docs/schemas/recognize.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let (error, _) = json_of(&["recognize", "data/two_triangles.mg"]);
    assert!(!validator.is_valid(&error));
    let (mut decision, _) = json_of(&["recognize", "data/k4.mg"]);
    assert!(validator.is_valid(&decision));
    decision["verdict"] = "maybe".into();
    assert!(!validator.is_valid(&decision));
}
