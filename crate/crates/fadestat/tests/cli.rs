use std::path::PathBuf;
use std::process::Command;

use fadestat::cli::{run, ScenarioFile, EXIT_ALL_MASKED, EXIT_OK, EXIT_SCHEMA};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fadestat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn golden_csv_is_byte_identical() {
    let cfg = fixture("fig1_0db.json");
    let (code, out, err) = call(&["lcr", "--config", cfg.to_str().unwrap(), "--grid", "-30:10:41"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let want = std::fs::read_to_string(fixture("fig1_0db.csv")).unwrap();
    assert_eq!(out, want);
}

#[test]
fn csv_shape() {
    let (code, out, _) = call(&["lcr", "--scenario", "fig1", "--grid", "-10:0:3"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains('\r'));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "gamma_norm_db,gamma_linear,lcr_exact_hz,lcr_approx_hz,lcr_mc_hz,lcr_mc_stderr,valid");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        assert_eq!(cells.len(), 7);
        assert_eq!(cells[4], "");
        assert_eq!(cells[6], "true");
    }
}

#[test]
fn json_scenario_round_trips() {
    let (code, out, _) = call(&["lcr", "--scenario", "sys23", "--grid", "-5:5:3", "--out", "json", "--seed", "7"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["formula_id"], "exact");
    let sc = ScenarioFile::parse(&v["scenario"].to_string()).unwrap();
    assert_eq!(sc.seed, Some(7));
    assert_eq!(sc.link().unwrap(), fadestat::scenarios::named("sys23").unwrap());
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn unknown_field_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"p_d":1,"f_d_hz":32,"noise_power":0.1,"l_branches":2,"interferers":[],"colour":"red"}"#,
    )
    .unwrap();
    let (code, _, err) = call(&["lcr", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_SCHEMA);
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn invalid_values_and_arguments_are_schema_errors() {
    assert_eq!(call(&["lcr", "--scenario", "nope"]).0, EXIT_SCHEMA);
    assert_eq!(call(&["lcr", "--scenario", "fig1", "--grid", "1:2"]).0, EXIT_SCHEMA);
    assert_eq!(call(&["lcr", "--scenario", "fig1", "--formulas", "magic"]).0, EXIT_SCHEMA);
    assert_eq!(call(&["frobnicate"]).0, EXIT_SCHEMA);
    assert_eq!(call(&["lcr"]).0, EXIT_SCHEMA);
}

#[test]
fn fully_masked_grid_exits_3() {
    let (code, out, err) = call(&["lcr", "--scenario", "fig2", "--grid", "-30:-20:3", "--formulas", "exact"]);
    assert_eq!(code, EXIT_ALL_MASKED, "{err}");
    assert!(out.lines().skip(1).all(|l| l.ends_with(",false")));
}

#[test]
fn mrg_defaults_to_the_five_power_ratios() {
    let (code, out, _) = call(&["mrg"]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 5);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(min, values[2]);
}

#[test]
fn mopt_defaults_cover_both_systems() {
    let (code, out, _) = call(&["mopt", "--symbol-rate", "1e5", "--symbol-rate", "1e6"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("L=2,N=2,rs=100000,"));
    assert!(rows[3].starts_with("L=4,N=4,rs=1000000,"));
}

#[test]
fn aod_per_and_throughput_run() {
    let (code, out, _) = call(&["aod", "--scenario", "sys22", "--grid", "-20:0:5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("gamma_norm_db,gamma_linear,cdf,lcr_exact_hz,aod_sec,valid\n"));

    let (code, out, _) = call(&["per", "--scenario", "sys22", "--lengths", "0,0.1,1"]);
    assert_eq!(code, EXIT_OK);
    let per: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(per[0] < per[1] && per[1] < per[2]);

    let (code, out, _) = call(&["throughput", "--scenario", "sys22", "--lengths", "10:10000:7", "--out", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["curves"][0][1]["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn validate_passes_on_its_default_scenario() {
    let (code, out, _) = call(&["validate", "--realizations", "40"]);
    assert!(out.contains("PASS quadrature"));
    assert!(out.contains("PASS aod_identity"));
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fadestat");
    let ok = Command::new(bin).args(["mrg"]).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("scenario,mrg\n"));
    let bad = Command::new(bin).args(["lcr", "--scenario", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_SCHEMA));
}
