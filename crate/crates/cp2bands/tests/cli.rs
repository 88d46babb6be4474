//! End-to-end checks of the command-line driver: file schemas, determinism,
//! and exit-status contracts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cp2bands"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cp2bands_cli_{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_fast_config(dir: &Path) -> PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        format!(
            "n = 4\n\
             lambda_steps = 5\n\
             line_grid_t = 48\n\
             line_grid_phi = 96\n\
             volume_grid = 8\n\
             search_grid = 8\n\
             search_sweeps = 16\n\
             window_resolution = 11\n\
             out = \"{}\"\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn spectrum_csv_schema_and_determinism() {
    let dir = temp_dir("spectrum");
    let config = write_fast_config(&dir);
    let out = run(&["spectrum", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.join("out/spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,level_index,energy"));
    assert_eq!(csv.lines().count(), 1 + 45 * 5);
    // level_index is 0-based and ascending within each lambda
    let first_data: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first_data[0], "0");
    assert_eq!(first_data[1], "0");

    let bands: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/bands.json")).unwrap())
            .unwrap();
    assert_eq!(bands["schema_version"], 1);
    assert_eq!(bands["bands"][0]["clusters"], serde_json::json!([15, 15, 15]));
    assert_eq!(bands["bands"][4]["clusters"], serde_json::json!([24, 21]));

    // byte-identical rerun
    let csv_bytes = std::fs::read(dir.join("out/spectrum.csv")).unwrap();
    let json_bytes = std::fs::read(dir.join("out/bands.json")).unwrap();
    let out = run(&["spectrum", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.join("out/spectrum.csv")).unwrap(), csv_bytes);
    assert_eq!(std::fs::read(dir.join("out/bands.json")).unwrap(), json_bytes);
}

#[test]
fn verify_matches_and_exits_zero() {
    let dir = temp_dir("verify");
    let config = write_fast_config(&dir);
    let out = run(&["verify", "--config", config.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "verify should pass at N=4: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["all_match"], true);

    let sections = report["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 2);
    let trivial = &sections[0]["records"][0];
    for key in ["band", "r", "A", "B", "predicted", "observed", "match"] {
        assert!(trivial.get(key).is_some(), "missing field {key}");
    }
    assert_eq!(trivial["r"], 1);
    assert_eq!(trivial["A"], 0);
    assert_eq!(trivial["predicted"], 15);
    assert_eq!(trivial["observed"], 15);

    let orth = &sections[1]["records"][0];
    assert_eq!(orth["band"], "Orth");
    assert_eq!(orth["r"], 2);
    assert_eq!(orth["A"], -1);
    assert_eq!(orth["B"], 1);
    assert_eq!(orth["predicted"], 24);
    let line = &sections[1]["records"][1];
    assert_eq!(line["band"], "Line");
    assert_eq!(line["predicted"], 21);
}

#[test]
fn chern_report_fields() {
    let dir = temp_dir("chern");
    let config = write_fast_config(&dir);
    let out = run(&[
        "chern",
        "--config",
        config.to_str().unwrap(),
        "--lambda",
        "1.0",
        "--bands",
        "1,2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/chern.json")).unwrap())
            .unwrap();
    assert_eq!(report["A"], -1);
    assert_eq!(report["B"], 1);
    assert_eq!(report["r"], 2);
    assert_eq!(report["A_plaquette"], -1);
    assert!(report["residuals"]["second_chern"].as_f64().unwrap() < 0.05);
    assert_eq!(report["grids"]["volume"], serde_json::json!([16, 16]));
}

#[test]
fn chern_gap_closed_is_machine_readable() {
    let dir = temp_dir("chern_err");
    let config = write_fast_config(&dir);
    // lambda = 0.55 sits on the 2-3 degeneracy surface: no invariant exists
    let out = run(&[
        "chern",
        "--config",
        config.to_str().unwrap(),
        "--lambda",
        "0.55",
        "--bands",
        "3",
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"code\":\"gap_closed\""), "stderr: {stderr}");
}

#[test]
fn degeneracy_window_report() {
    let dir = temp_dir("degeneracy");
    let config = write_fast_config(&dir);
    let out = run(&[
        "degeneracy",
        "--config",
        config.to_str().unwrap(),
        "--pair",
        "2,3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/degeneracy.json")).unwrap())
            .unwrap();
    assert_eq!(report["pair"], serde_json::json!([2, 3]));
    let windows = report["windows"].as_array().unwrap();
    assert_eq!(windows.len(), 1);
    let lo = windows[0][0].as_f64().unwrap();
    let hi = windows[0][1].as_f64().unwrap();
    assert!((lo - 0.5).abs() < 0.05, "window low {lo}");
    assert!((hi - 2.0 / 3.0).abs() < 0.05, "window high {hi}");
    assert_eq!(report["samples"].as_array().unwrap().len(), 11);
}

#[test]
fn symmetry_table_for_n3() {
    let dir = temp_dir("symmetry");
    let config = write_fast_config(&dir);
    let out = run(&[
        "symmetry",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "3",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/symmetry.json")).unwrap())
            .unwrap();
    assert_eq!(report["n"], 3);
    let line = &report["bands"][0];
    assert_eq!(line["band"], "Line");
    assert_eq!(line["dimension"], 15);
    assert_eq!(line["o3"], serde_json::json!(["0_g", "2_g", "4_g"]));
    assert_eq!(
        line["td"],
        serde_json::json!([["A1", 2], ["E", 2], ["F1", 1], ["F2", 2]])
    );
    let orth = &report["bands"][1];
    assert_eq!(orth["o3"], serde_json::json!(["1_g", "2_g", "3_g"]));
}

#[test]
fn invalid_config_fails_with_code() {
    let dir = temp_dir("badconfig");
    let path = dir.join("bad.toml");
    std::fs::write(&path, "n = 0\n").unwrap();
    let out = run(&["spectrum", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("config_invalid"), "stderr: {stderr}");
}

#[test]
fn flags_override_config_keys() {
    let dir = temp_dir("override");
    let config = write_fast_config(&dir);
    let other = dir.join("other_out");
    let out = run(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "1",
        "--steps",
        "2",
        "--out",
        other.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(other.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9 * 2);
}
