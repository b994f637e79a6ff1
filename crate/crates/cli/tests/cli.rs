use std::path::PathBuf;

use opalg_cli::dispatch;
use opalg_cli::schema::{AlgebraJson, EvolutionJson, MatrixJson, MatrixSetJson, SequenceJson, ValuesJson};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn argv(args: &[&str]) -> Vec<String> {
    args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect()
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = dispatch(argv(args));
    let report = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, report)
}

const COMMANDS: &[&[&str]] = &[
    &["spectrum", "id3.json"],
    &["spectrum", "general.json"],
    &["positivity", "positive.json"],
    &["sqrt", "positive.json"],
    &["polar", "hermitian.json"],
    &["gelfand", "z4.json"],
    &["gns", "m2.json", "trace_state.json"],
    &["gns", "z4.json", "z4_state.json"],
    &["commutant", "blocks.json"],
    &["diagonalize", "diagonal_rep.json", "cyclic_vector.json"],
    &["evolve", "evolve.json"],
    &["wiener", "wiener.json"],
];

#[test]
fn identity_spectrum() {
    let (code, r) = run(&["spectrum", "id3.json"]);
    assert_eq!(code, 0);
    let ev = r["results"]["eigenvalues"].as_array().unwrap();
    assert_eq!(ev.len(), 3);
    assert!(ev.iter().all(|z| z[0] == 1.0 && z[1] == 0.0));
    for key in ["command", "inputs", "results", "residuals", "tolerances", "elapsed_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn tracial_gns() {
    let (code, r) = run(&["gns", "m2.json", "trace_state.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["quotient_dim"], 4);
    assert_eq!(r["results"]["commutant_dim"], 4);
    let (_, r) = run(&["gns", "m2.json", "vector_state.json"]);
    assert_eq!(r["results"]["commutant_dim"], 1);
}

#[test]
fn domain_errors_exit_one() {
    let (code, r) = run(&["wiener", "bad.json"]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "TransformVanishes");
    assert!(r["error"]["modulus"].as_f64().unwrap() < 1e-10);
    let (code, r) = run(&["sqrt", "not_positive.json"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (1, Some("NotPositive")));
    let (code, r) = run(&["gns", "m2.json", "not_positive_functional.json"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (1, Some("NotPositive")));
    let (code, r) = run(&["gelfand", "m2.json"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (1, Some("NotCommutative")));
}

#[test]
fn malformed_input_exits_two() {
    let (code, r) = run(&["spectrum", "malformed.json"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "MalformedJson");
    assert_eq!(r["error"]["line"], 3);
    assert!(r["error"]["column"].is_u64());
    let (code, r) = run(&["spectrum", "trace_state.json"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (2, Some("InvalidSchema")));
    let (code, r) = run(&["spectrum", "missing.json"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (2, Some("Io")));
    let (code, r) = run(&["frobnicate", "id3.json"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (2, Some("UnknownCommand")));
    let (code, _) = run(&["spectrum", "id3.json", "--tol", "-1"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_deterministic() {
    for args in COMMANDS {
        let first = dispatch(argv(args));
        let second = dispatch(argv(args));
        assert_eq!(first.code, 0, "{args:?}: {}", first.stdout);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

fn sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(sorted)
        }
        Value::Array(a) => a.iter().all(sorted),
        _ => true,
    }
}

#[test]
fn report_keys_are_sorted_in_output() {
    for args in COMMANDS {
        let (_, r) = run(args);
        assert!(sorted(&r), "{args:?}");
    }
    // also at the byte level: "command" precedes "elapsed_ms" precedes "inputs"
    let out = dispatch([String::from("spectrum"), fixture("id3.json")]).stdout;
    let pos = |k: &str| out.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("command") < pos("elapsed_ms") && pos("elapsed_ms") < pos("inputs"));
}

fn reparses<T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug>(file: &str, echo: &Value) {
    let parsed: T = serde_json::from_str(&std::fs::read_to_string(fixture(file)).unwrap()).unwrap();
    let again: T = serde_json::from_value(echo["value"].clone()).unwrap();
    assert_eq!(parsed, again, "{file}");
}

#[test]
fn inputs_echo_round_trips() {
    let (_, r) = run(&["spectrum", "general.json"]);
    reparses::<MatrixJson>("general.json", &r["inputs"]["files"]["matrix"]);
    let (_, r) = run(&["gns", "m2.json", "trace_state.json"]);
    reparses::<AlgebraJson>("m2.json", &r["inputs"]["files"]["algebra"]);
    reparses::<ValuesJson>("trace_state.json", &r["inputs"]["files"]["functional"]);
    let (_, r) = run(&["commutant", "blocks.json"]);
    reparses::<MatrixSetJson>("blocks.json", &r["inputs"]["files"]["set"]);
    let (_, r) = run(&["evolve", "evolve.json"]);
    reparses::<EvolutionJson>("evolve.json", &r["inputs"]["files"]["config"]);
    let (_, r) = run(&["wiener", "wiener.json"]);
    reparses::<SequenceJson>("wiener.json", &r["inputs"]["files"]["sequence"]);
}

#[test]
fn text_format_and_out_file() {
    let out = dispatch([String::from("spectrum"), fixture("id3.json"), "--format".into(), "text".into()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().any(|l| l == "results.op_norm = 1.0"));
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("report.json");
    let out = dispatch([String::from("spectrum"), fixture("id3.json"), "--out".into(), path.display().to_string()]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "spectrum");
}

#[test]
fn timing_is_opt_in() {
    let (_, r) = run(&["wiener", "wiener.json"]);
    assert_eq!(r["elapsed_ms"], 0.0);
    let (_, r) = run(&["wiener", "wiener.json", "--timing"]);
    assert!(r["elapsed_ms"].as_f64().unwrap() > 0.0);
}

#[test]
fn command_results() {
    let (_, r) = run(&["wiener", "wiener.json"]);
    assert!(r["residuals"]["convolution"].as_f64().unwrap() <= 1e-8);
    let (_, r) = run(&["diagonalize", "diagonal_rep.json", "cyclic_vector.json"]);
    let mu: f64 = r["results"]["measure"].as_array().unwrap().iter().map(|m| m.as_f64().unwrap()).sum();
    assert!((mu - 1.0).abs() < 1e-12);
    let (_, r) = run(&["evolve", "evolve.json"]);
    let pi_state = &r["results"]["states"][2]["vector"][0];
    assert!((pi_state[0].as_f64().unwrap() + 1.0).abs() < 1e-15);
    let (_, r) = run(&["polar", "hermitian.json"]);
    assert!(r["residuals"]["jordan_sum"].as_f64().unwrap() <= 1e-10);
}
