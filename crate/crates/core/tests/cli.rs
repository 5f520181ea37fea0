//! End-to-end runs of the `dnls-lab` binary: exit codes, reproducible
//! reports, append-only run directories and field dumps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use dnls_lab::cli::FieldDump;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn dnls_lab(args: &[&str], config: &Path, out: &Path, threads: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dnls-lab"));
    cmd.args(args).arg("--config").arg(config).arg("--out").arg(out);
    if let Some(t) = threads {
        cmd.env("DNLS_LAB_THREADS", t);
    }
    let o = cmd.output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

const ROUNDTRIP: &str = r#"{"name": "rt", "seed": 3, "params": {"domain": {"kind": "torus", "n_points": 64}, "samples": 10}}"#;

const SOLVE: &str = r#"{
  "name": "small",
  "params": {
    "domain": {"kind": "torus", "n_points": 32},
    "nonlinearity": {"lambda": 0.5, "k": 1},
    "dt": 1e-3,
    "t_final": 0.02,
    "initial": {"kind": "random", "band": 4, "h1_norm": 0.3}
  }
}"#;

#[test]
fn passing_run_writes_reproducible_append_only_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "rt.json", ROUNDTRIP);
    let out = tmp.path().join("out");
    assert_eq!(dnls_lab(&["gauge-roundtrip"], &cfg, &out, None).0, 0);
    assert_eq!(dnls_lab(&["gauge-roundtrip"], &cfg, &out, Some("1")).0, 0);
    let base = out.join("rt-gauge-roundtrip-seed3");
    let a = fs::read(base.join("run-1/report.json")).unwrap();
    let b = fs::read(base.join("run-2/report.json")).unwrap();
    assert_eq!(a, b);
    assert!(fs::read_to_string(base.join("run-1/report.csv")).unwrap().starts_with("kind,key,value,limit,passed\n"));

    // the seed override selects a different experiment directory
    assert_eq!(dnls_lab(&["gauge-roundtrip", "--seed", "4"], &cfg, &out, None).0, 0);
    assert!(out.join("rt-gauge-roundtrip-seed4/run-1/report.json").exists());
}

#[test]
fn failed_check_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let text = ROUNDTRIP.replace(r#""samples": 10"#, r#""samples": 10, "tolerance": 1e-300"#);
    let cfg = write_config(tmp.path(), "strict.json", &text);
    let (code, err) = dnls_lab(&["gauge-roundtrip"], &cfg, tmp.path(), None);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("FAIL"));
}

#[test]
fn schema_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let missing_dt =
        write_config(tmp.path(), "pw.json", r#"{"name": "pw", "params": {"amplitude": 0.5, "t_final": 0.1}}"#);
    let (code, err) = dnls_lab(&["plane-wave"], &missing_dt, tmp.path(), None);
    assert_eq!(code, 2);
    assert!(err.contains("dt"), "{err}");

    let unknown = write_config(tmp.path(), "u.json", &ROUNDTRIP.replace("samples", "sampels"));
    assert_eq!(dnls_lab(&["gauge-roundtrip"], &unknown, tmp.path(), None).0, 2);

    let wrong_scenario = write_config(tmp.path(), "w.json", &ROUNDTRIP.replace(r#""name""#, r#""scenario": "solve", "name""#));
    assert_eq!(dnls_lab(&["gauge-roundtrip"], &wrong_scenario, tmp.path(), None).0, 2);

    assert_eq!(dnls_lab(&["no-such-scenario"], &unknown, tmp.path(), None).0, 2);
    assert_eq!(dnls_lab(&["gauge-roundtrip"], &tmp.path().join("absent.json"), tmp.path(), None).0, 2);
}

#[test]
fn solve_dumps_round_trip_bit_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "solve.json", SOLVE);
    assert_eq!(dnls_lab(&["solve"], &cfg, tmp.path(), None).0, 0);
    let run = tmp.path().join("small-solve-seed0/run-1");
    let path = run.join("final.fd");
    let bytes = fs::read(&path).unwrap();
    let dump = FieldDump::read(&path).unwrap();
    assert_eq!(dump.header.n_points, 32);
    assert_eq!(dump.to_bytes().unwrap(), bytes);
    let f = dump.to_spectral().unwrap();
    assert_eq!(FieldDump::from_spectral(&f, dump.header.time).to_bytes().unwrap(), bytes);
    assert!(run.join("plotdata/l2_norm.tsv").exists());
}
