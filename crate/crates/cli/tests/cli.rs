use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use thermocorr::energycost::{protocol_work_closed_form, ProtocolKind};
use thermocorr::thermal::ThermalSystem;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thermocorr"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn validator() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn two_qubit_threshold_json() {
    let v = json_of(&["threshold", "--family", "two-qubit"]);
    let kt = v["results"]["thresholds"][0]["kT_over_E"].as_f64().unwrap();
    assert!((kt - 1.19).abs() < 0.01);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn mi_sweep_csv_has_monotone_rows() {
    let out = run(&[
        "sweep",
        "--kind",
        "mi-vs-energy",
        "--kT",
        "0.5",
        "--points",
        "50",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,y_ansatz"));
    let ys: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ys.len(), 50);
    assert!(ys.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn ghz_protocol_work_matches_closed_form() {
    let v = json_of(&["protocol", "--name", "ghz", "--n", "4", "--kT", "0.3"]);
    let sys = ThermalSystem::qubits(4, 1.0 / 0.3).unwrap();
    let expected = protocol_work_closed_form(ProtocolKind::Ghz, &sys).unwrap();
    assert!((v["results"]["work"].as_f64().unwrap() - expected).abs() < 1e-9);
}

#[test]
fn wstate_discrepancy_is_reported() {
    let v = json_of(&["protocol", "--name", "dicke", "--n", "5", "--k", "1", "--kT", "0.5"]);
    let w = &v["diagnostics"]["wstate_work"];
    assert_eq!(w["direct"], v["results"]["work"]);
    assert!(w["discrepancy"].as_f64().unwrap() >= 0.0);
}

#[test]
fn outputs_validate_against_schema() {
    let schema = validator();
    let runs: [&[&str]; 7] = [
        &["threshold", "--family", "gme-dicke", "--n", "6,8", "--k", "1"],
        &["threshold", "--family", "upper-qubit-qudit", "--n", "3"],
        &[
            "protocol",
            "--name",
            "circulant",
            "--d",
            "3",
            "--kT",
            "1",
            "--deltaE",
            "0.2",
        ],
        &["protocol", "--name", "ghz-single", "--n", "5", "--kT", "0.7"],
        &["sweep", "--kind", "mi-vs-energy", "--kT", "1", "--points", "4"],
        &["optimize", "--kT", "0.5", "--deltaE", "0.3", "--restarts", "2"],
        &["--selftest", "--trials", "20"],
    ];
    for args in runs {
        let v = json_of(args);
        let errors: Vec<String> = schema.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn identical_config_gives_identical_files() {
    let args = [
        "optimize",
        "--kT",
        "0.7",
        "--deltaE",
        "0.4",
        "--restarts",
        "6",
        "--seed",
        "9",
    ];
    let (a, b) = (tmp("opt_a.json"), tmp("opt_b.json"));
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let st = bin()
            .args(args)
            .arg("--out")
            .arg(path)
            .env("THERMOCORR_THREADS", threads)
            .status()
            .unwrap();
        assert!(st.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let csv_args = ["threshold", "--family", "all-bip", "--n", "3,5,9", "--format", "csv"];
    assert_eq!(run(&csv_args).stdout, run(&csv_args).stdout);
}

#[test]
fn validation_errors_exit_with_two() {
    let cases: [&[&str]; 6] = [
        &["threshold", "--family", "nonsense"],
        &["threshold", "--family", "all-bip"],
        &["protocol", "--name", "verstraete", "--n", "3", "--kT", "1"],
        &["protocol", "--name", "ghz", "--n", "3", "--kT", "-1"],
        &["optimize", "--kT", "0.5", "--deltaE", "0.3", "--restarts", "0"],
        &[],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    let bad_threads = bin()
        .args(["threshold", "--family", "two-qubit"])
        .env("THERMOCORR_THREADS", "zero")
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(bad_threads.code(), Some(2));
}

#[test]
fn selftest_flag_passes() {
    let v = json_of(&["--selftest", "--trials", "100", "--seed", "5"]);
    assert_eq!(v["results"]["passed"], Value::Bool(true));
    assert_eq!(v["results"]["checks"], 400);
}
