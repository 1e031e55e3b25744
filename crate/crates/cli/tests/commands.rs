use std::process::Command;

use cascades_cli::render::rational_from_json;
use cascades_cli::{run, REPORT_SCHEMA};
use cascades_core::{int, Rational};
use serde_json::Value;

fn cascades(args: &[&str]) -> cascades_cli::Execution {
    run(std::iter::once("cascades").chain(args.iter().copied()))
}

fn json_report(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let e = cascades(&all);
    (serde_json::from_str(&e.stdout).expect("stdout is JSON"), e.code)
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v:#}");
}

const QUARTIC: &str = "x^4 - 24x^3 + 198x^2 - 648x + 473";

#[test]
fn every_subcommand_emits_schema_valid_json() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["bounds", QUARTIC],
        vec!["bounds", "x - 3"],
        vec!["bounds", "x^2 + x + 1"],
        vec!["cascades", QUARTIC],
        vec!["cascades", "x"],
        vec!["isolate", "x^3 - 3x + 1"],
        vec!["isolate", "x^5 - x^4", "--positive-only"],
        vec!["refine", "x^2 - 2", "--interval", "1,2", "--method", "newton", "--tol", "1e-15", "--trace"],
        vec!["refine", "x^2 - 2", "--interval", "1,2", "--method", "falsepos", "--tol", "1e-15"],
        vec!["refine", "x^2 - 4", "--interval", "2,3"],
        vec!["certify", QUARTIC],
        vec!["certify", "x^2 + 1"],
        vec!["replay"],
        vec!["compare", "x^3 - 2", "--interval", "1,2", "--tol", "1e-20"],
        vec!["isolate", "0"],
        vec!["isolate", "x^"],
        vec!["refine", "x^2 + 1", "--interval", "0,1"],
    ];
    for args in runs {
        let (v, code) = json_report(&args);
        assert_valid(&v);
        assert_eq!(v["command"], args[0]);
        assert_eq!(code == 0, v.get("results").is_some(), "{args:?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let (mut v, _) = json_report(&["bounds", QUARTIC]);
    v["results"]["great"]["den"] = Value::from("0");
    assert!(!validator().is_valid(&v));
    let (mut v, _) = json_report(&["isolate", QUARTIC]);
    v["results"]["roots"][0]["kind"] = Value::from("approximate");
    assert!(!validator().is_valid(&v));
    let (mut v, _) = json_report(&["replay"]);
    v.as_object_mut().unwrap().remove("version");
    assert!(!validator().is_valid(&v));
}

#[test]
fn exit_codes() {
    assert_eq!(cascades(&["replay"]).code, 0);
    assert_eq!(cascades(&["isolate", "x^2 +* 1"]).code, 1);
    assert_eq!(cascades(&["frobnicate"]).code, 1);
    assert_eq!(cascades(&["refine", QUARTIC]).code, 1);
    assert_eq!(cascades(&["--digits", "0", "replay"]).code, 1);
    assert_eq!(cascades(&["isolate", "7"]).code, 2);
    assert_eq!(cascades(&["refine", "x^2 + 1", "--interval", "0,1"]).code, 2);
    assert_eq!(cascades(&["refine", "x - 1/2", "--interval", "0,1", "--tol", "0"]).code, 2);
    assert_eq!(cascades(&["certify", "x - 1"]).code, 2);
    assert_eq!(cascades(&["--help"]).code, 0);
}

#[test]
fn input_is_echoed_canonically() {
    let (v, _) = json_report(&["bounds", "473,-648,198,-24,1"]);
    assert_eq!(v["input"], QUARTIC);
    let (v, _) = json_report(&["isolate", "-x^2 + 1"]);
    assert_eq!(v["input"], "-x^2 + 1");
}

#[test]
fn bounds_of_the_quartic() {
    let (v, _) = json_report(&["bounds", QUARTIC]);
    let great = rational_from_json(&v["results"]["great"]).unwrap();
    assert_eq!(great, int(649));
    assert_eq!(rational_from_json(&v["results"]["sum_of_squares"]).unwrap(), int(180));
}

#[test]
fn isolate_reports_exact_roots_and_multiplicity() {
    let (v, _) = json_report(&["isolate", QUARTIC]);
    let roots = v["results"]["roots"].as_array().unwrap();
    let values: Vec<Rational> = roots.iter().map(|r| rational_from_json(&r["value"]).unwrap()).collect();
    assert_eq!(values, vec![int(1), int(11)]);

    let (v, _) = json_report(&["isolate", "x^3 - 4x^2 + 4x"]);
    let roots = v["results"]["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[1]["multiplicity"], 2);
}

#[test]
fn compare_is_deterministic() {
    let args = ["compare", "x^3 - 3x + 1", "--interval", "0,1", "--tol", "1e-20"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    let (a, code) = json_report(&args);
    let (b, _) = json_report(&args);
    assert_eq!(code, 0);
    assert_eq!(strip(a.clone()), strip(b));
    assert_eq!(a["results"]["agree"], true);
    let methods: Vec<&str> = a["results"]["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["bisection", "false_position", "newton_safeguarded"]);
}

#[test]
fn refine_reports_exact_endpoint_root() {
    let (v, code) = json_report(&["refine", "x^2 - 4", "--interval", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["outcome"], "exact_root");
    assert_eq!(rational_from_json(&v["results"]["exact"]).unwrap(), int(2));
}

#[test]
fn text_output_of_replay() {
    let e = cascades(&["replay"]);
    assert!(e.stdout.contains("great_hypothesis level 2 = 13"));
    assert!(e.stdout.contains("left root Exact 1"));
    assert!(e.stdout.contains("all values match"));
}

#[test]
fn binary_runs_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_cascades"))
        .args(["--json", "isolate", "473,-648,198,-24,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid(&v);

    let out = Command::new(env!("CARGO_BIN_EXE_cascades"))
        .args(["isolate", "x^2 + + 1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 6"));
}
