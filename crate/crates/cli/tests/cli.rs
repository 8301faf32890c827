use std::io::Write;
use std::process::{Command, Output, Stdio};

use qcl_core::states::density_from_json_str;
use qcl_core::tomography::forward_probes;
use qcl_core::ComplexMatrix;

fn qcl3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcl3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qcl3_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qcl3"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_examples() {
    let o = qcl3(&["eval", "effprob(|1>)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");

    let o = qcl3(&["eval", "probs(H3(|0>))"]);
    assert_eq!(stdout(&o), "0: 0.333333, 1/2: 0.333333, 1: 0.333333\n");

    let o = qcl3(&["eval", "prob_true(|0 0>)", "--dim", "2"]);
    assert_eq!(stdout(&o), "0\n");

    let o = qcl3(&["eval", "entropy(mix(1/2:|0>, 1/2:|1>))"]);
    assert_eq!(stdout(&o), "0.75\n");
}

#[test]
fn eval_json_has_full_precision() {
    let o = qcl3(&["--json", "eval", "prob_true(H3(|0>))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "probability");
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn eval_density_json_round_trips_through_reader() {
    let o = qcl3(&["--json", "eval", "SQNOT[1/2](H3(|0>))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rho = density_from_json_str(&v["value"].to_string()).unwrap();
    assert_eq!(rho.dim(), 3);
}

#[test]
fn eval_errors_exit_one() {
    for expr in [
        "|2>",
        "H3(|0 0>)",
        "probs(|0>",
        "FOO(|0>)",
        "mix(0.5:|0>, 0.4:|1>)",
    ] {
        let o = qcl3(&["eval", expr]);
        assert_eq!(o.status.code(), Some(1), "{expr}");
        assert!(stderr(&o).starts_with("error:"), "{expr}: {}", stderr(&o));
    }
    let o = qcl3(&["eval", "H3(|0>)", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("signature error"));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(qcl3(&[]).status.code(), Some(1));
    assert_eq!(qcl3(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qcl3(&["--dim", "4", "eval", "|0>"]).status.code(), Some(1));
    assert_eq!(
        qcl3(&["--tolerance", "0.1", "verify"]).status.code(),
        Some(1)
    );
    assert_eq!(qcl3(&["--help"]).status.code(), Some(0));
    assert_eq!(qcl3(&["--version"]).status.code(), Some(0));
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn reconstruct_uniform_probes_gives_maximally_mixed() {
    let f = write_temp("[0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]");
    let o = qcl3(&["reconstruct", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], true);
    let rho = density_from_json_str(&v["density"].to_string()).unwrap();
    let want = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
    assert!(rho.matrix().max_abs_diff(&want).unwrap() < 1e-15);
    assert!(v["bloch"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x.as_f64().unwrap().abs() < 1e-15));
}

#[test]
fn reconstruct_round_trips_basis_state() {
    let rho0 = density_from_json_str(
        r#"{"d":3,"n":1,"re":[[1,0,0],[0,0,0],[0,0,0]],"im":[[0,0,0],[0,0,0],[0,0,0]]}"#,
    )
    .unwrap();
    let probes = forward_probes(&rho0).unwrap();
    let o = qcl3_stdin(&["reconstruct", "-"], &probes.to_json_string());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rho = density_from_json_str(&v["density"].to_string()).unwrap();
    assert!(rho.matrix().max_abs_diff(rho0.matrix()).unwrap() < 1e-9);
}

#[test]
fn reconstruct_unphysical_probes_exit_two() {
    let f = write_temp("[0, 0.5, 0.25, 0.5, 0, 0.25, 0.5, 0]");
    let o = qcl3(&["reconstruct", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("-0.333333333333") && err.contains("0.666666666667"),
        "{err}"
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn reconstruct_malformed_input_exit_one() {
    for text in [
        "not json",
        "[0.5, 0.5]",
        "[0.5,0.5,0.5,0.5,0.5,0.5,0.5,1.5]",
    ] {
        let f = write_temp(text);
        let o = qcl3(&["reconstruct", f.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{text}");
    }
    let o = qcl3(&["reconstruct", "/nonexistent/probes.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("value.json");
    let o = qcl3(&[
        "--json",
        "--out",
        path.to_str().unwrap(),
        "eval",
        "bloch(|1>)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["value"][7], -1.0);
}

#[test]
fn verify_default_run_passes() {
    let o = qcl3(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("PASS H3^2 = NOT[0]"));
    assert!(text.contains("NOTE") && text.contains("unverifiable"));
}

#[test]
fn verify_json_and_seed() {
    let o = qcl3(&["--json", "--seed", "42", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() > 40);
}

#[test]
fn verify_tolerance_is_plumbed_through() {
    let o = qcl3(&["--json", "--tolerance", "1e-15", "verify"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bounds: Vec<f64> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["relation"] == "at_most")
        .map(|c| c["bound"].as_f64().unwrap())
        .collect();
    assert!(!bounds.is_empty() && bounds.iter().all(|&b| b == 1e-15));
    let passed = v["passed"].as_bool().unwrap();
    assert_eq!(o.status.code(), Some(if passed { 0 } else { 3 }));
}

#[test]
fn gate_dump_prints_exact_entries() {
    let o = qcl3(&["gate", "dump", "NOT[1/2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "NOT[1/2] (d=3, n=1, semiclassical)\n\
         [0+0i, 0+0i, 1+0i]\n\
         [0+0i, 1+0i, 0+0i]\n\
         [1+0i, 0+0i, 0+0i]\n"
    );

    let o = qcl3(&["gate", "dump", "SQI[1]"]);
    let s = "0.70710678118654757";
    assert_eq!(
        stdout(&o),
        format!(
            "SQI[1] (d=3, n=1, genuinely quantum)\n\
             [{s}+0i, {s}+0i, 0+0i]\n\
             [{s}+0i, -{s}+0i, 0+0i]\n\
             [0+0i, 0+0i, 1+0i]\n"
        )
    );
}

#[test]
fn gate_dump_json_entries_round_trip() {
    let o = qcl3(&["--json", "gate", "dump", "H3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "genuinely-quantum");
    let want = qcl_core::gates::h3().unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(v["re"][i][j].as_f64().unwrap(), want.matrix().get(i, j).re);
            assert_eq!(v["im"][i][j].as_f64().unwrap(), want.matrix().get(i, j).im);
        }
    }
}

#[test]
fn gate_dump_unknown_lists_catalog() {
    let o = qcl3(&["gate", "dump", "FOO"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("FOO") && err.contains("SQNOT[1/2]") && err.contains("H3"));
}
