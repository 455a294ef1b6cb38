use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn ptcycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptcycle")).args(args).output().expect("binary runs")
}

fn ptcycle_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptcycle"))
        .args(args)
        .env("PTCYCLE_NUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect()).collect()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn assert_error_line(o: &Output, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().last().unwrap();
    let (tag, _) = line.split_once(": ").expect("error_code: detail");
    assert!(tag.chars().all(|c| c.is_ascii_lowercase() || c == '_'), "{line}");
}

#[test]
fn thermo_sweep_crosses_caption_entropy_twice() {
    let o = ptcycle(&["thermo", "--N", "160", "--nu", "12", "--lambda", "-24", "--tmin", "0.5", "--tmax", "10", "--steps", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "T,Z,F,U,S,p");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 100);
    let crossings = rows
        .windows(2)
        .filter(|w| w[0][0] >= 5.4 && w[1][0] <= 6.0)
        .filter(|w| (w[0][4] + 2.51338).signum() != (w[1][4] + 2.51338).signum())
        .count();
    assert_eq!(crossings, 2);
}

#[test]
fn thermo_single_step_and_exceptional_point() {
    let o = ptcycle(&["thermo", "--lambda", "0", "--nu", "3", "--tmin", "2", "--steps", "1", "--precision", "15"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 2.0);
    // two degenerate oscillators at ν: Z = 1/(1 − e^{−ν/T})²
    let q: f64 = (-1.5f64).exp();
    let z = 1.0 / ((1.0 - q) * (1.0 - q));
    assert!((rows[0][1] - z).abs() < 1e-12 * z);
    let u = 2.0 * 3.0 * q / (1.0 - q);
    assert!((rows[0][3] - u).abs() < 1e-12 * u);
}

#[test]
fn thermo_reports_offending_temperature() {
    let o = ptcycle(&["thermo", "--lambda", "10"]);
    assert_error_line(&o, 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("T = 0.5"));
}

#[test]
fn json_and_csv_agree() {
    let c = csv_rows(&stdout(&ptcycle(&["thermo", "--tmin", "5", "--tmax", "6", "--steps", "3"])));
    let j = json(&ptcycle(&["thermo", "--tmin", "5", "--tmax", "6", "--steps", "3", "--format", "json"]));
    for (row, obj) in c.iter().zip(j.as_array().unwrap()) {
        assert_eq!(row[4], obj["S"].as_f64().unwrap());
    }
}

#[test]
fn tlambda_cycle_work() {
    let o = ptcycle(&["cycle", "--kind", "tlambda", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert!((v["totals"]["work"].as_f64().unwrap() - 2.3238).abs() < 1e-3);
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
    for key in ["dQ", "dW", "dU", "from", "to", "kind"] {
        assert!(v["steps"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn carnot_cycle_efficiency() {
    let v = json(&ptcycle(&["cycle", "--kind", "carnot", "--format", "json"]));
    assert!((v["efficiency"].as_f64().unwrap() - 0.06473).abs() < 5e-5);
    assert_eq!(v["path_label"], "Gamma1");
}

#[test]
fn symmetric_two_lambda_cycle_is_infeasible() {
    let o = ptcycle(&["cycle", "--N", "120", "--nu", "25", "--lambda", "4.5", "--tmin", "35.5489", "--tmax", "88.4576"]);
    assert_error_line(&o, 3);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("cycle_infeasible: "));
}

#[test]
fn time_plane_contour_hits_caption_points() {
    let o = ptcycle(&[
        "contour", "--plane", "time-t", "--c1", "4.75", "--level", "-2.51338", "--tmin", "5.5324", "--tmax", "5.91528",
        "--precision", "12",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "polyline_id,x,y");
    let rows = csv_rows(&text);
    for (temp, time) in [(5.53240, 0.0023241), (5.91528, 0.0023532)] {
        let best = rows
            .iter()
            .filter(|r| (r[2] - temp).abs() < 1e-12)
            .map(|r| (r[1] - time).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(best < 5e-7, "T={temp}: {best}");
    }
}

#[test]
fn lambda_plane_contour_is_multi_branch() {
    let o = ptcycle(&["contour", "--plane", "lambda-t", "--level", "3.16977", "--tmin", "5", "--tmax", "6.5"]);
    let ids: std::collections::BTreeSet<i64> = csv_rows(&stdout(&o)).iter().map(|r| r[0] as i64).collect();
    assert!(ids.len() > 1);
}

#[test]
fn empty_contour_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = ptcycle(&["contour", "--plane", "lambda-t", "--level", "1e6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap().len(), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn time_contour_needs_c1() {
    assert_error_line(&ptcycle(&["contour", "--plane", "time-t"]), 2);
}

#[test]
fn phase_regions_at_t5() {
    let v = json(&ptcycle(&["phase", "--T", "5", "--nu", "12", "--N", "160", "--branch", "1", "--format", "json"]));
    assert_eq!(v["maxwell_pressure"].as_f64().unwrap(), 0.0);
    let b: Vec<f64> = v["binodal"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let s: Vec<f64> = v["spinodal"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(b[0] < s[0] && s[0] < s[1] && s[1] < b[1]);
    let base = -4.0 * PI * PI * 25.0 / 160.0;
    assert!((b[1] - base).abs() < 1e-7 * base.abs());
    assert!((b[0] - 4.0 * base).abs() < 1e-7 * base.abs());
}

#[test]
fn phase_widths_follow_t_squared() {
    let width = |t: &str| {
        let v = json(&ptcycle(&["phase", "--T", t, "--format", "json", "--precision", "17"]));
        v["binodal"][1].as_f64().unwrap() - v["binodal"][0].as_f64().unwrap()
    };
    let ratio = width("5") / width("0.01");
    assert!((ratio / 250000.0 - 1.0).abs() < 1e-9);
}

#[test]
fn isentrope_in_symmetric_regime() {
    let o = ptcycle(&[
        "isentrope", "--vary", "lambda", "--N", "120", "--nu", "25", "--lambda", "4.5", "--level", "6", "--tmin",
        "35.5489", "--tmax", "88.4576", "--steps", "11",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "T,lambda");
    assert_eq!(csv_rows(&text).len(), 11);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model":{"nu":25,"N":120,"lambda":4.5},"sweep":{"tmin":30,"tmax":40,"steps":3}}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let rows = csv_rows(&stdout(&ptcycle(&["thermo", "--config", c])));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][0], 40.0);
    let rows = csv_rows(&stdout(&ptcycle(&["thermo", "--config", c, "--steps", "5"])));
    assert_eq!(rows.len(), 5);
}

#[test]
fn bad_config_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"model":{"nu":"twelve"}}"#).unwrap();
    assert_error_line(&ptcycle(&["thermo", "--config", cfg.to_str().unwrap()]), 2);
    assert_error_line(&ptcycle(&["thermo", "--precision", "20"]), 2);
    assert_error_line(&ptcycle(&["thermo", "--nu", "-1"]), 2);
}

#[test]
fn precision_controls_digits() {
    let text = stdout(&ptcycle(&["thermo", "--tmin", "5", "--steps", "1", "--precision", "6"]));
    let s = text.lines().nth(1).unwrap().split(',').nth(4).unwrap();
    let digits = s.trim_start_matches('-').replace('.', "");
    assert!(digits.trim_start_matches('0').len() <= 6, "{s}");
}

fn write_and_read(args: &[&str], threads: &str, path: &Path) -> Vec<u8> {
    let mut full = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    assert!(ptcycle_threads(&full, threads).status.success());
    std::fs::read(path).unwrap()
}

#[test]
fn output_is_byte_stable_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["contour", "--plane", "lambda-t", "--level", "3.16977", "--tmin", "5", "--tmax", "6.5"];
    let a = write_and_read(&args, "1", &dir.path().join("a.csv"));
    let b = write_and_read(&args, "4", &dir.path().join("b.csv"));
    let c = write_and_read(&args, "0", &dir.path().join("c.csv"));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(!a.contains(&b'\r'));
}

#[test]
fn bad_thread_count_is_config_error() {
    assert_error_line(&ptcycle_threads(&["thermo"], "many"), 2);
}

#[test]
fn verify_reports_derived_lambda2() {
    let text = stdout(&ptcycle(&["verify"]));
    assert!(text.contains("derived lambda2 = -38.00006"));
    assert!(text.contains("criterion  1 PASS"));
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 11);
}

#[test]
fn verify_fails_on_perturbed_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("v.json");
    std::fs::write(&cfg, r#"{"verify":{"s1":-2.4}}"#).unwrap();
    let o = ptcycle(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_error_line(&o, 4);
    assert!(stdout(&o).contains("criterion  1 FAIL"));
}

#[test]
fn verify_fresh_build_passes() {
    let o = ptcycle(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
}
