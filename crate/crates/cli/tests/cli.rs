use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(dir: &Path, config: &Value, overrides: &[&str]) -> Output {
    let path = dir.join("run.json");
    fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gqrm"));
    cmd.arg(&path);
    for o in overrides {
        cmd.args(["--set", o]);
    }
    cmd.output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn quartic(tilt: f64, n_points: usize) -> Value {
    json!({
        "command": "reduce",
        "output": "reduce.json",
        "potential": {
            "x_min": -4.0, "x_max": 4.0, "n_points": n_points,
            "shape": { "kind": "quartic", "beta": 1.0, "x0": 1.5, "tilt": tilt }
        }
    })
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn reduce_symmetric_well_is_unbiased() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &quartic(0.0, 2000), &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = read_json(&dir.path().join("reduce.json"));
    assert!(r["epsilon"].as_f64().unwrap().abs() < 1e-9);
    assert!(r["delta"].as_f64().unwrap() > 0.0);
    assert_eq!(r["valid"], json!(true));
}

#[test]
fn reduce_tilted_well_matches_gap() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &quartic(0.05, 2000), &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = read_json(&dir.path().join("reduce.json"));
    assert!(r["epsilon"].as_f64().unwrap().abs() > 0.01);
    assert!(r["gap_consistency"].as_f64().unwrap() < 1e-6);
}

#[test]
fn reduce_rejects_tiny_grid() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &quartic(0.0, 2), &[]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n_points"));
}

#[test]
fn reduce_single_well_is_flagged() {
    let dir = TempDir::new().unwrap();
    let config = json!({
        "command": "reduce",
        "output": "reduce.json",
        "potential": { "x_min": -6.0, "x_max": 6.0, "n_points": 800, "shape": { "kind": "harmonic", "omega": 1.0 } }
    });
    let out = run(dir.path(), &config, &[]);
    assert_eq!(code(&out), 3);
    let r = read_json(&dir.path().join("reduce.json"));
    assert_eq!(r["valid"], json!(false));
}

#[test]
fn overrides_apply_and_unknown_keys_fail() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &quartic(0.0, 2000), &["potential.shape.tilt=0.05"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = read_json(&dir.path().join("reduce.json"));
    assert!(r["epsilon"].as_f64().unwrap().abs() > 0.01);

    let mut bad = quartic(0.0, 2000);
    bad["potential"]["depth"] = json!(3.0);
    assert_eq!(code(&run(dir.path(), &bad, &[])), 2);
    assert_eq!(code(&run(dir.path(), &quartic(0.0, 2000), &["solver.bogus=1"])), 2);
}

fn formfactor(ka: &[f64]) -> Value {
    json!({
        "command": "formfactor",
        "output": "ff.csv",
        "mode": { "omega_ph": 1.0, "profile": { "kind": "cosine", "k": 1.0, "phi": 0.0 } },
        "formfactor": { "ka_values": ka }
    })
}

#[test]
fn formfactor_values() {
    let dir = TempDir::new().unwrap();
    let pi = std::f64::consts::PI;
    let out = run(dir.path(), &formfactor(&[pi, 2.0 * pi]), &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("ff.csv")).unwrap();
    assert!(text.starts_with("k_times_a,suppression_factor\n"));
    let rows = csv_rows(&text);
    let at_pi: f64 = rows[0][1].parse().unwrap();
    let at_2pi: f64 = rows[1][1].parse().unwrap();
    assert!((at_pi - 2.0 / pi).abs() < 1e-10);
    assert!(at_2pi.abs() < 1e-12);
}

#[test]
fn formfactor_needs_cosine_profile() {
    let dir = TempDir::new().unwrap();
    let mut config = formfactor(&[1.0]);
    config["mode"]["profile"] = json!({ "kind": "uniform" });
    assert_eq!(code(&run(dir.path(), &config, &[])), 2);
}

fn verify(cutoff: usize, displacement: &str) -> Value {
    json!({
        "command": "verify-gauge",
        "output": "report.json",
        "seed": 11,
        "two_level": { "omega_q": 1.0, "epsilon": 0.2 },
        "mode": { "omega_ph": 1.0 },
        "cross_frame": { "eta": if cutoff > 20 { 0.5 } else { 1.0 }, "cutoff": cutoff, "displacement": displacement }
    })
}

#[test]
fn verify_gauge_passes() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &verify(80, "truncated_generator"), &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["passed"], json!(true));
    assert_eq!(r["seed"], json!(11));
    assert_eq!(r["rng"], json!("ChaCha8Rng"));
    assert_eq!(r["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_gauge_reports_analytic_truncation() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &verify(8, "analytic"), &[]);
    assert_eq!(code(&out), 6);
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["passed"], json!(false));
    assert!(stderr(&out).contains("cross_frame_spectrum"));
}

#[test]
fn wilson_check_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let config = json!({ "command": "wilson-check", "output": "w.json", "seed": 5 });
    assert_eq!(code(&run(dir.path(), &config, &[])), 0);
    let first = fs::read(dir.path().join("w.json")).unwrap();
    assert_eq!(code(&run(dir.path(), &config, &[])), 0);
    assert_eq!(first, fs::read(dir.path().join("w.json")).unwrap());
    let r: Value = serde_json::from_slice(&first).unwrap();
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 2);
}

fn spectrum(frame: &str) -> Value {
    json!({
        "command": "spectrum",
        "output": "s.csv",
        "two_level": { "omega_q": 1.0, "epsilon": 0.2 },
        "mode": { "omega_ph": 1.0 },
        "sweep": { "eta_grid": [0.0, 0.3, 0.6, 0.9], "n_levels": 5, "frame": frame, "svg": "plots/s.svg" }
    })
}

#[test]
fn spectrum_is_deterministic_and_frame_independent() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &spectrum("coulomb"), &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let coulomb = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(coulomb.starts_with("eta,level_index,delta_e_over_omega,cutoff,residual,converged\n"));
    assert!(fs::read_to_string(dir.path().join("plots/s.svg")).unwrap().contains("<svg"));

    assert_eq!(code(&run(dir.path(), &spectrum("coulomb"), &[])), 0);
    assert_eq!(coulomb, fs::read_to_string(dir.path().join("s.csv")).unwrap());

    assert_eq!(code(&run(dir.path(), &spectrum("dipole"), &[])), 0);
    let dipole = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let (a, b) = (csv_rows(&coulomb), csv_rows(&dipole));
    assert_eq!(a.len(), 4 * 5);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x[0], y[0]);
        assert_eq!(x[1], y[1]);
        let (u, v): (f64, f64) = (x[2].parse().unwrap(), y[2].parse().unwrap());
        assert!((u - v).abs() < 1e-9, "{u} vs {v}");
        assert_eq!(x[5], "true");
    }
}

#[test]
fn spectrum_reports_unconverged_cutoff() {
    let dir = TempDir::new().unwrap();
    let out = run(
        dir.path(),
        &spectrum("coulomb"),
        &["sweep.eta_grid=[3.0]", "sweep.cutoff_policy={\"n_start\": 4, \"n_max\": 8}", "sweep.svg=null"],
    );
    assert_eq!(code(&out), 5, "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(csv_rows(&text).iter().all(|r| r[5] == "false"));
}

#[test]
fn missing_config_is_config_error() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gqrm")).arg(dir.path().join("absent.json")).output().unwrap();
    assert_eq!(code(&out), 2);
}
