//! End-to-end checks of the command-line interface: artifact formats, exit
//! codes, and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mublab::mub::{fourier_basis, MatrixJson};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mublab")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mublab-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const FREE_CONFIG: &str = r#"{
  "units": { "hbar": 1.0, "mass": 1.0 },
  "grid": { "n_points": 256, "x_min": -16.0, "x_max": 16.0 },
  "potential": { "type": "free" },
  "sweep": [0.64],
  "seed": 42,
  "window": 0.25
}"#;

#[test]
fn kernel_free_oracle_abs_is_flat_per_time() {
    let dir = scratch_dir("kernel-free");
    let config = write_config(&dir, "free.json", FREE_CONFIG);
    let out_path = dir.join("kernel.csv");
    let output = run(&[
        "kernel",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# mublab"));
    assert_eq!(lines.next().unwrap(), "x,y,t,abs,phase,method");
    let mut abs_min = f64::INFINITY;
    let mut abs_max = f64::NEG_INFINITY;
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[5], "oracle");
        let abs: f64 = fields[3].parse().unwrap();
        abs_min = abs_min.min(abs);
        abs_max = abs_max.max(abs);
        rows += 1;
    }
    assert_eq!(rows, 64 * 64);
    assert!(
        abs_max / abs_min <= 1.05,
        "free kernel moduli spread {:.4} exceeds 5%",
        abs_max / abs_min
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn kernel_rejects_empty_sweep_with_exit_2() {
    let dir = scratch_dir("empty-sweep");
    let config = write_config(&dir, "empty.json", &FREE_CONFIG.replace("[0.64]", "[]"));
    let output = run(&["kernel", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(
        err.contains("schema"),
        "diagnostic should mention the schema: {err}"
    );
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_potential_field_is_a_schema_error() {
    let dir = scratch_dir("missing-potential");
    let config = write_config(
        &dir,
        "broken.json",
        r#"{
  "units": { "hbar": 1.0, "mass": 1.0 },
  "grid": { "n_points": 64, "x_min": -8.0, "x_max": 8.0 },
  "sweep": [0.5],
  "seed": 42,
  "window": 0.5
}"#,
    );
    let output = run(&["kernel", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn harmonic_caustic_exits_3() {
    let dir = scratch_dir("caustic");
    let config = write_config(
        &dir,
        "caustic.json",
        r#"{
  "units": { "hbar": 1.0, "mass": 1.0 },
  "grid": { "n_points": 64, "x_min": -8.0, "x_max": 8.0 },
  "potential": { "type": "harmonic", "omega": 1.0 },
  "sweep": [3.14159265358979323846],
  "seed": 1,
  "window": 0.5,
  "method": "closed_form"
}"#,
    );
    let output = run(&["kernel", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("caustic"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn mub_check_verdicts() {
    let dir = scratch_dir("mub-check");
    // Fourier matrix: MUB with deficit at rounding level
    let fourier = MatrixJson::from_matrix(fourier_basis(16).columns());
    let fourier_path = dir.join("fourier.json");
    fs::write(&fourier_path, serde_json::to_string(&fourier).unwrap()).unwrap();
    let output = run(&["mub-check", "--matrix", fourier_path.to_str().unwrap()]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["verdict"], "MUB");
    assert_eq!(report["unitary"], true);
    assert_eq!(report["unimodular"], true);
    assert!(report["deficit"].as_f64().unwrap() <= 1e-12);

    // identity matrix: not a MUB partner of itself
    let eye = MatrixJson::from_matrix(&ndarray::Array2::eye(8));
    let eye_path = dir.join("eye.json");
    fs::write(&eye_path, serde_json::to_string(&eye).unwrap()).unwrap();
    let output = run(&["mub-check", "--matrix", eye_path.to_str().unwrap()]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["verdict"], "not-MUB");

    // malformed JSON: exit 2
    let bad_path = dir.join("bad.json");
    fs::write(&bad_path, "{ not json").unwrap();
    let output = run(&["mub-check", "--matrix", bad_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn insertion_needs_a_seed_and_reports_tiny_error() {
    let output = run(&["insertion", "--dim", "8"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("seed"));

    let output = run(&["insertion", "--dim", "8", "--bases", "5", "--seed", "9"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(report["abs_error"].as_f64().unwrap() <= 1e-10);
    assert_eq!(report["meta"]["seed"], 9);

    // same seed, same bytes
    let again = run(&["insertion", "--dim", "8", "--bases", "5", "--seed", "9"]);
    assert_eq!(output.stdout, again.stdout);
}

#[test]
fn riccati_writes_trajectories() {
    // default step count: fine enough for the stiff 1/(2t) start
    let output = run(&[
        "riccati", "--k1", "0", "--k2", "0", "--k3", "0", "--t-end", "0.5",
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# mublab"));
    assert_eq!(lines.next().unwrap(), "t,r,s,p");
    assert_eq!(lines.count(), 10_001);
    // free solution: final R = 1/(2 * 0.5) = 1
    let last = text.lines().last().unwrap();
    let r: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((r - 1.0).abs() < 1e-6);
}

#[test]
fn riccati_blowup_exits_3() {
    let output = run(&[
        "riccati", "--k1", "-1", "--k2", "0", "--k3", "0", "--t-end", "2.0", "--steps", "100000",
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("blow-up"));
}

#[test]
fn field_phase_artifacts() {
    let dir = scratch_dir("field-phase");
    // zero field: alpha = beta = 0, total phase exactly zero
    let zero = r#"{"dims":1,"sites":16,"spacing":0.5,"mass":1.0,"values":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#;
    let zero_path = dir.join("zero.json");
    fs::write(&zero_path, zero).unwrap();
    let output = run(&[
        "field-phase",
        "--field",
        zero_path.to_str().unwrap(),
        "--t",
        "0.3",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("# total_phase=0.0000000000000000e0"));
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("mode_index,omega,contribution"));

    // small t adds the short-time comparison footer
    let bumpy = r#"{"dims":1,"sites":16,"spacing":0.5,"mass":1.0,"values":[0.4,0.1,-0.2,0.3,0.0,0.1,-0.1,0.2,0.4,0.0,-0.3,0.2,0.1,0.0,-0.1,0.3]}"#;
    let bumpy_path = dir.join("bumpy.json");
    fs::write(&bumpy_path, bumpy).unwrap();
    let output = run(&[
        "field-phase",
        "--field",
        bumpy_path.to_str().unwrap(),
        "--t",
        "0.001",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("# short_time_phase="));
    let rel_line = text
        .lines()
        .find(|l| l.starts_with("# short_time_rel_dev="))
        .expect("short-time footer");
    let rel: f64 = rel_line
        .trim_start_matches("# short_time_rel_dev=")
        .parse()
        .unwrap();
    assert!(rel <= 1e-2, "short-time deviation {rel}");

    // a massless lattice has a zero-mode caustic: exit 3 naming the mode
    let massless = r#"{"dims":1,"sites":16,"spacing":0.5,"mass":0.0,"values":[0.4,0.1,-0.2,0.3,0.0,0.1,-0.1,0.2,0.4,0.0,-0.3,0.2,0.1,0.0,-0.1,0.3]}"#;
    let massless_path = dir.join("massless.json");
    fs::write(&massless_path, massless).unwrap();
    let output = run(&[
        "field-phase",
        "--field",
        massless_path.to_str().unwrap(),
        "--t",
        "0.3",
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("mode 0"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn rescale_4form_reports_coefficients() {
    let output = run(&[
        "rescale-4form",
        "--s",
        "0.25",
        "--grad-coeff",
        "0.5",
        "--mass-coeff",
        "0.5",
        "--potential",
        r#"{"type":"polynomial","coeffs":[0,0,0,0,1]}"#,
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["kinetic_coeff"], 0.5);
    assert_eq!(report["grad_coeff"].as_f64().unwrap(), 0.5 / 16.0);
    let coeffs = report["potential"]["coeffs"].as_array().unwrap();
    assert!((coeffs[4].as_f64().unwrap() - 1.0 / 64.0).abs() < 1e-15);

    // tabulated potentials cannot be rescaled analytically: numeric domain? no - config error
    let output = run(&[
        "rescale-4form",
        "--s",
        "0.25",
        "--potential",
        r#"{"type":"harmonic","omega":1.0}"#,
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn scaling_check_reports_both_sides() {
    let dir = scratch_dir("scaling");
    let config = write_config(
        &dir,
        "harm.json",
        r#"{
  "units": { "hbar": 1.0, "mass": 1.0 },
  "grid": { "n_points": 128, "x_min": -8.0, "x_max": 8.0 },
  "potential": { "type": "free" },
  "sweep": [0.1],
  "seed": 5,
  "window": 0.5
}"#,
    );
    let output = run(&[
        "scaling-check",
        "--config",
        config.to_str().unwrap(),
        "--x",
        "0.5",
        "--y",
        "-0.2",
        "--t",
        "0.1",
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    // plumbing check only; the n=128 grid is coarse (precision is covered by
    // the acceptance suite at criterion-4 geometry)
    assert!(report["rel_error"].as_f64().unwrap() < 0.2);
    assert!(report["lhs"]["re"].is_number());
    assert!(report["rhs"]["im"].is_number());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn deficit_sweep_csv_has_curve_columns() {
    let dir = scratch_dir("sweep");
    let config = write_config(
        &dir,
        "sweep.json",
        r#"{
  "units": { "hbar": 1.0, "mass": 1.0 },
  "grid": { "n_points": 64, "x_min": -8.0, "x_max": 8.0 },
  "potential": { "type": "harmonic", "omega": 1.0 },
  "sweep": [0.4, 0.2, 0.1],
  "seed": 3,
  "window": 0.5
}"#,
    );
    let output = run(&["deficit-sweep", "--config", config.to_str().unwrap()]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# mublab"));
    assert_eq!(lines.next().unwrap(), "t,deficit,window,potential");
    assert_eq!(lines.count(), 3);
    assert!(text.contains("harmonic(omega=1)"));
    fs::remove_dir_all(&dir).ok();
}
