use std::fs;
use std::process::{Command, Output};

fn qcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_line(o: &Output) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("value: "))
        .expect("value line")
        .parse()
        .unwrap()
}

#[test]
fn eval_qcos_at_zero_is_one() {
    let o = qcalc(&["eval", "qcos", "--q", "0.5", "--x", "0"]);
    assert!(o.status.success());
    assert_eq!(value_line(&o), 1.0);
    assert!(stdout(&o).contains("method: series"));
}

#[test]
fn eval_reference_values() {
    let o = qcalc(&["eval", "qcos", "--q", "0.5", "--x", "1"]);
    assert!((value_line(&o) - 0.383_298_013_916_536_2).abs() < 1e-14);
    let o = qcalc(&["eval", "qgamma", "--q", "0.5", "--x", "3"]);
    assert!((value_line(&o) - 1.5).abs() < 1e-14);
    let o = qcalc(&["eval", "pochhammer", "--q", "0.5", "--x", "0.5", "--n", "3"]);
    assert_eq!(value_line(&o), 0.328125);
}

#[test]
fn extended_precision_agrees_with_binary64() {
    let a = value_line(&qcalc(&["eval", "qsin", "--q", "0.5", "--x", "2.5"]));
    let b = value_line(&qcalc(&["eval", "qsin", "--q", "0.5", "--x", "2.5", "--precision", "extended"]));
    assert!((a - b).abs() < 1e-13 * b.abs().max(1e-3), "{a} vs {b}");
}

#[test]
fn eval_json_is_parseable() {
    let o = qcalc(&["eval", "jalpha", "--q-structural", "2", "--x", "3", "--alpha", "0.5", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["function"], "jalpha");
    assert!(v["n_terms"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(qcalc(&["eval", "nosuch", "--x", "1"]).status.code(), Some(2));
    assert_eq!(qcalc(&["eval", "qexp_e", "--q", "0.5", "--x", "2"]).status.code(), Some(1));
    assert_eq!(qcalc(&["--q", "1.5", "eval", "qcos", "--x", "0"]).status.code(), Some(2));
    assert_eq!(qcalc(&["--kmin", "5", "--kmax", "1", "eval", "qcos", "--x", "0"]).status.code(), Some(2));
    assert_eq!(qcalc(&["--tol-fit", "0", "eval", "qcos", "--x", "0"]).status.code(), Some(2));
    assert_eq!(qcalc(&["solve", "--p", "bogus", "--K", "4"]).status.code(), Some(2));
    assert_eq!(qcalc(&["bessel-asym", "--alpha", "-0.7", "--K", "2"]).status.code(), Some(1));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"q": 0.25}"#).unwrap();
    let o = qcalc(&["--config", cfg.to_str().unwrap(), "eval", "qcos", "--x", "0"]);
    assert!(stdout(&o).contains("q: 0.25"));
    let o = qcalc(&["--config", cfg.to_str().unwrap(), "--q", "0.5", "eval", "qcos", "--x", "0"]);
    assert!(stdout(&o).contains("q: 0.5"));

    fs::write(&cfg, r#"{"nosuch": 1}"#).unwrap();
    let o = qcalc(&["--config", cfg.to_str().unwrap(), "eval", "qcos", "--x", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_writes_files_per_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = qcalc(&[
        "solve", "--q", "0.5", "--p", "compact:0:5:0.1", "--alpha", "0.3", "--K", "4,8", "--out", out,
        "--jobs", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for k in [4, 8] {
        let csv = fs::read_to_string(dir.path().join(format!("solution_K{k}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,x,phi,theta,ode_residual"));
        assert_eq!(lines.count(), 101);
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("coeffs_K{k}.json"))).unwrap())
                .unwrap();
        assert_eq!(json["K"], k);
        for f in ["mu", "nu", "mu1", "nu1", "main_identity_residual"] {
            assert!(json[f].is_number(), "{f}");
        }
    }
}

#[test]
fn solve_output_is_independent_of_job_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (d, jobs) in [(&a, "1"), (&b, "3")] {
        let o = qcalc(&[
            "solve", "--q", "0.5", "--p", "compact:2:6:-0.2", "--K", "4,6,8", "--out", d.path().to_str().unwrap(),
            "--jobs", jobs,
        ]);
        assert!(o.status.success());
    }
    for k in [4, 6, 8] {
        for f in [format!("solution_K{k}.csv"), format!("coeffs_K{k}.json")] {
            assert_eq!(fs::read(a.path().join(&f)).unwrap(), fs::read(b.path().join(&f)).unwrap(), "{f}");
        }
    }
}

#[test]
fn bessel_asym_csv() {
    let o = qcalc(&["bessel-asym", "--q", "0.5", "--alpha", "0.5", "--K", "2..4", "--j", "0,1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("alpha,K,lambda,x,j_alpha,principal,remainder,bound"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn heat_writes_json_array() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcalc(&["heat", "--q", "0.5", "--alpha", "0,1", "--s", "0", "--K", "4", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("heat.json")).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert!(arr[0]["corrected_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_core_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcalc(&["verify", "core", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("suite core: PASS"));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_core.json")).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}
