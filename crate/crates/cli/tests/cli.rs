use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use projgraft_cli::Report;
use serde_json::{json, Value};

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    path.to_string_lossy().into_owned()
}

/// Runs the binary and returns stdout and the exit code.
fn projgraft(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_projgraft"))
        .args(args)
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn json_report(args: &[&str]) -> (Report, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (out, code) = projgraft(&all);
    let report: Report = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    (report, code)
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

/// Every invocation exercised by the round-trip and determinism tests.
fn invocations() -> Vec<Vec<String>> {
    let cmds: [(&str, &str); 12] = [
        ("graft-end", "half_turns.json"),
        ("graft-end", "full_turn.json"),
        ("graft-end", "geodesic.json"),
        ("graft-end", "decreasing.json"),
        ("infer-end", "loxodromic.json"),
        ("exponent", "geodesic.json"),
        ("surface", "crowned_torus.json"),
        ("classify-rep", "torus.json"),
        ("classify-rep", "bad_relator.json"),
        ("check-framing", "framed_torus.json"),
        ("check-framing", "framed_affine.json"),
        ("fg-coords", "square.json"),
    ];
    let mut v: Vec<Vec<String>> = cmds.iter().map(|(c, f)| vec![c.to_string(), data(f)]).collect();
    v.push(vec!["verify-paper".into()]);
    v.push(vec!["surface".into(), data("pants.json")]);
    v.push(vec!["classify-rep".into(), data("trivial_torus.json")]);
    v
}

#[test]
fn two_half_turns_close_up() {
    let (r, code) = json_report(&["graft-end", &data("half_turns.json")]);
    assert_eq!(code, 0);
    assert_eq!(r.field("multiplier"), Some(&json!([1.0, 0.0])));
    assert_eq!(r.field("constant"), Some(&json!([0.0, 0.0])));
    assert_eq!(r.field("pole_order"), Some(&json!("NoPole")));
}

#[test]
fn one_full_turn_gives_a_simple_pole() {
    let (r, code) = json_report(&["graft-end", &data("full_turn.json")]);
    assert_eq!(code, 0);
    assert_eq!(r.field("constant"), Some(&json!([1.0, 0.0])));
    assert_eq!(r.field("pole_order"), Some(&json!("Order1")));
}

#[test]
fn verify_suite_passes() {
    for seed in ["0", "1", "12345"] {
        let (r, code) = json_report(&["verify-paper", "--seed", seed]);
        assert_eq!(code, 0, "{r:?}");
        assert!(r
            .fields
            .iter()
            .filter(|f| f.name.ends_with("_ok"))
            .all(|f| f.value == json!(true)));
    }
    assert_eq!(projgraft(&["verify-paper"]).1, 0);
}

#[test]
fn schema_errors_exit_2_with_pointers() {
    let (r, code) = json_report(&["graft-end", &data("decreasing.json")]);
    assert_eq!(code, 2);
    assert_eq!(r.field("error").unwrap()["pointer"], "/leaves");

    let (r, code) = json_report(&["classify-rep", &data("bad_relator.json")]);
    assert_eq!(code, 2);
    let error = r.field("error").unwrap();
    assert_eq!(error["pointer"], "/relator");
    assert!(error["message"].as_str().unwrap().contains("residual"));

    let zero_weight = temp_json(r#"{"end": "cusp", "leaves": [{"position": 0, "weight": {"radians": 0}}]}"#);
    let (r, code) = json_report(&["graft-end", zero_weight.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r.field("error").unwrap()["pointer"], "/leaves");

    let unknown = temp_json(r#"{"end": "cusp", "leaves": [], "colour": 1}"#);
    assert_eq!(projgraft(&["graft-end", unknown.path().to_str().unwrap()]).1, 2);
    let framed = temp_json(
        r#"{"rep": {"surface": {"genus": 1, "punctures": 1}, "generators": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]},
            "framing": [{"marked_point": 4, "value": 0}]}"#,
    );
    let (r, code) = json_report(&["check-framing", framed.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r.field("error").unwrap()["pointer"], "/framing/0/marked_point");
}

#[test]
fn unusable_input_exits_2() {
    let garbage = temp_json("{ not json");
    assert_eq!(projgraft(&["surface", garbage.path().to_str().unwrap()]).1, 2);
    assert_eq!(projgraft(&["surface", "/nonexistent/signature.json"]).1, 2);
    assert_eq!(projgraft(&["surface", &data("pants.json"), "--tolerance", "-1"]).1, 2);
    assert_eq!(projgraft(&["no-such-command"]).1, 2);
    let sphere = temp_json(r#"{"genus": 0, "punctures": 2}"#);
    assert_eq!(projgraft(&["surface", sphere.path().to_str().unwrap()]).1, 2);
}

#[test]
fn missed_tolerance_exits_3() {
    // Rounding in the composed trace² exceeds an absurdly tight tolerance.
    let (r, code) = json_report(&["graft-end", &data("geodesic.json"), "--tolerance", "1e-300"]);
    assert_eq!(code, 3);
    assert_eq!(r.field("closed_form_agrees"), Some(&json!(false)));
}

#[test]
fn strict_branch_rejects_the_cut() {
    let args = ["exponent", &data("full_turn.json"), "--at", "[-1, 0]"];
    let (r, code) = json_report(&args);
    assert_eq!(code, 0);
    assert_eq!(r.field("model_values"), Some(&json!([[-1.0, std::f64::consts::PI]])));
    let mut strict = args.to_vec();
    strict.push("--strict-branch");
    let (r, code) = json_report(&strict);
    assert_eq!(code, 2);
    assert_eq!(r.field("error").unwrap()["pointer"], "/at/0");
    assert_eq!(json_report(&["exponent", &data("full_turn.json"), "--at", "inf"]).1, 2);
}

#[test]
fn classification_and_framing() {
    let (r, _) = json_report(&["classify-rep", &data("torus.json")]);
    assert_eq!(r.field("degenerate"), Some(&json!(true)));
    assert_eq!(r.field("in_image"), Some(&json!(true)));
    let (r, _) = json_report(&["classify-rep", &data("trivial_torus.json")]);
    assert_eq!(r.field("in_image"), Some(&json!(false)));
    assert_eq!(r.field("witness_framing"), Some(&Value::Null));
    let (r, _) = json_report(&["check-framing", &data("framed_torus.json")]);
    assert_eq!(r.field("degenerate"), Some(&json!(false)));
    let (r, _) = json_report(&["check-framing", &data("framed_affine.json")]);
    assert_eq!(r.field("witness"), Some(&json!({"condition": "1", "p": "inf"})));
    let (r, _) = json_report(&["fg-coords", &data("square.json")]);
    assert_eq!(r.field("edges").unwrap()[0]["value"], json!([-1.0, 0.0]));
}

#[test]
fn json_reports_reparse() {
    for args in invocations() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (report, _) = json_report(&args);
        let mut all = vec!["--format", "json"];
        all.extend_from_slice(&args);
        assert_eq!(report.to_json(), projgraft(&all).0, "{args:?}");
    }
}

/// `name = value` lines of a text report, with the trailing formula dropped.
fn text_fields(text: &str) -> Vec<(String, Value)> {
    text.lines()
        .skip(1)
        .map(|line| {
            let (name, rest) = line.trim_start().split_once(" = ").unwrap();
            let value = rest.split_once("    # ").map_or(rest, |(v, _)| v);
            (name.to_string(), serde_json::from_str(value).unwrap())
        })
        .collect()
}

#[test]
fn text_and_json_agree() {
    for args in invocations() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (report, code) = json_report(&args);
        let (text, text_code) = projgraft(&args);
        assert_eq!(code, text_code);
        let status = serde_json::to_value(report.status).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            format!("{}: {}", report.command, status.as_str().unwrap())
        );
        let from_json: Vec<(String, Value)> = report.fields.into_iter().map(|f| (f.name, f.value)).collect();
        assert_eq!(text_fields(&text), from_json, "{args:?}");
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in invocations() {
        let mut all: Vec<&str> = vec!["--format", "json", "--seed", "7"];
        all.extend(args.iter().map(String::as_str));
        assert_eq!(projgraft(&all), projgraft(&all), "{args:?}");
    }
}
