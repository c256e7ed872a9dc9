use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use birkhoff::config::parse_config;
use birkhoff::run::{nls_suite, refinement_levels, VerifyReport, Which};
use birkhoff::sample::sample_nls;
use birkhoff::Tolerances;
use birkhoff_core::verify::TimeConvention;
use tempfile::TempDir;

const ONE_SOLITON: &str = "[[soliton]]\nalpha = 0.3\nbeta = 0.5\nx0 = 0.2\nphi = 0.4\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_birkhoff"))
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], config: &Path) -> Output {
    bin()
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn nls_csv_is_byte_exact_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "one.toml",
        &format!("{ONE_SOLITON}[grid]\nnx = 41\nnt = 21\n"),
    );
    let a = run(&["nls"], &cfg);
    let b = run(&["nls"], &cfg);
    assert_eq!(a.status.code(), Some(0));
    assert!(a.stdout.starts_with(b"x,t,re_u,im_u,abs_u\n"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        String::from_utf8(a.stdout).unwrap().lines().count(),
        41 * 21 + 1
    );
}

#[test]
fn nls_peak_matches_amplitude() {
    let dir = TempDir::new().unwrap();
    // Peak at x = 0 when x₀ = 0 and t = 0.
    let cfg = write_config(
        &dir,
        "peak.toml",
        "[[soliton]]\nalpha = 0.3\nbeta = 0.5\nx0 = 0\nphi = 0\n[grid]\nnx = 41\nnt = 21\n",
    );
    let out = run(&["nls"], &cfg);
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let peak = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert!((peak[4] - 0.5).abs() < 1e-9);
    assert!(rows.iter().all(|r| r[4] <= 0.5 + 1e-12));
}

#[test]
fn hm_csv_reproduces_the_domain_wall() {
    let dir = TempDir::new().unwrap();
    let alpha: f64 = 0.3;
    let cfg = write_config(
        &dir,
        "wall.toml",
        &format!("[[soliton]]\nalpha = 0\nbeta = {alpha}\nx0 = 0\nphi = 1.5707963267948966\n[grid]\nnx = 41\nnt = 21\n"),
    );
    let out = run(&["hm"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.starts_with(b"x,t,s1,s2,s3,norm_err\n"));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for r in &rows {
        let s = 1.0 / (2.0 * alpha * r[0]).cosh();
        assert!((r[4] - (2.0 * s * s - 1.0)).abs() < 1e-9);
        assert!(r[5] < 1e-10);
        if r[0] == 0.0 && r[1] == 0.0 {
            assert!((r[4] - 1.0).abs() < 1e-15 && r[2].abs() < 1e-15 && r[3].abs() < 1e-15);
        }
    }
}

#[test]
fn hm_unit_convention_dilates_time() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "one.toml",
        &format!("{ONE_SOLITON}[grid]\nnx = 11\nnt = 11\n"),
    );
    let half = csv_rows(&String::from_utf8(run(&["hm"], &cfg).stdout).unwrap());
    let unit = csv_rows(
        &String::from_utf8(run(&["hm", "--time-convention", "unit"], &cfg).stdout).unwrap(),
    );
    let data = parse_config(&fs::read_to_string(&cfg).unwrap())
        .unwrap()
        .spectral;
    let ev = birkhoff_core::gauge::HmEvaluator::new(data).unwrap();
    for (h, u) in half.iter().zip(&unit) {
        assert_eq!(h[..2], u[..2]);
        let native = ev.eval(u[0], 2.0 * u[1]).unwrap();
        assert!((native.s3 - u[4]).abs() < 1e-15);
    }
}

#[test]
fn json_output_and_refined_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "one.toml",
        &format!("{ONE_SOLITON}[grid]\nnx = 11\nnt = 7\n"),
    );
    let out = dir.path().join("u.json");
    let status = bin()
        .args(["nls", "--format", "json", "--refine", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["samples"].as_array().unwrap().len(), 77);
    let refined: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("u.refined.json")).unwrap()).unwrap();
    assert_eq!(refined["samples"].as_array().unwrap().len(), 21 * 13);

    assert_eq!(run(&["nls", "--refine"], &cfg).status.code(), Some(1));
}

#[test]
fn verify_one_soliton_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "one.toml",
        &format!("{ONE_SOLITON}[grid]\nnx = 101\nnt = 51\n"),
    );
    let out = run(&["verify"], &cfg);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["passed"], true);
    let nls = &doc["suites"][0];
    assert_eq!(nls["name"], "nls_residual");
    let order = nls["levels"][1]["observed_order"].as_f64().unwrap();
    assert!((order - 2.0).abs() < 0.4);
    for key in [
        "quantity",
        "max_norm",
        "rms_norm",
        "hx",
        "ht",
        "observed_order",
        "notes",
    ] {
        assert!(nls["levels"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn corrupted_slice_fails_threshold() {
    let cfg = parse_config(&format!("{ONE_SOLITON}[grid]\nnx = 101\nnt = 51\n")).unwrap();
    let tol = Tolerances::default();
    let grids = refinement_levels(&cfg.grid, 2);
    let mut fields: Vec<_> = grids
        .iter()
        .map(|g| sample_nls(&cfg.spectral, g).unwrap())
        .collect();
    assert!(birkhoff::run::nls_suite(&fields, &tol).unwrap().passed);
    // Scale u by 1.01 on the slice nearest t = 0.2 at every level.
    for f in &mut fields {
        let g = *f.grid();
        let j = ((0.2 - g.tmin) / g.ht()).round() as usize;
        for i in 0..g.nx {
            f.values_mut()[g.index(i, j)] *= 1.01;
        }
    }
    let suite = nls_suite(&fields, &tol).unwrap();
    assert!(!suite.passed, "{}", suite.message);
    let report = VerifyReport {
        schema_version: 1,
        command: "verify",
        which: Which::Nls,
        n: 1,
        grid: cfg.grid,
        levels: 2,
        time_convention: TimeConvention::Half,
        passed: false,
        suites: vec![suite],
    };
    assert_eq!(report.exit_code(), 3);
}

#[test]
fn duplicate_points_exit_validation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "dup.toml",
        "[[spectral]]\npoint = [0.1, 0.4]\nlambda = [1, 0]\n[[spectral]]\npoint = [0.1, 0.4]\nlambda = [0, 1]\n",
    );
    for cmd in ["nls", "hm", "verify", "crosscheck"] {
        let out = run(&[cmd], &cfg);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("coincide"));
    }
}

#[test]
fn bad_configs_and_flags_exit_validation() {
    let dir = TempDir::new().unwrap();
    let outside = write_config(
        &dir,
        "out.toml",
        "[[spectral]]\npoint = [0, 1.2]\nlambda = [1, 0]\n",
    );
    assert_eq!(run(&["nls"], &outside).status.code(), Some(1));
    let missing = dir.path().join("missing.toml");
    assert_eq!(run(&["nls"], &missing).status.code(), Some(1));
    let cfg = write_config(&dir, "one.toml", ONE_SOLITON);
    assert_eq!(
        run(&["nls", "--format", "xml"], &cfg).status.code(),
        Some(1)
    );
    assert_eq!(
        bin().arg("frobnicate").output().unwrap().status.code(),
        Some(1)
    );
}

#[test]
fn crosscheck_passes_and_wrong_sign_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "one.toml",
        &format!("{ONE_SOLITON}[grid]\nnx = 21\nnt = 21\n"),
    );
    let ok = run(&["crosscheck"], &cfg);
    assert_eq!(ok.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["comparisons"].as_array().unwrap().len(), 2);
    assert!(doc["comparisons"][1]["max_deviation"].as_f64().unwrap() < 1e-9);

    let bad = run(&["crosscheck", "--a-sign", "printed"], &cfg);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("printed tanh sign disagrees"));

    let three = write_config(
        &dir,
        "three.toml",
        "[[spectral]]\npoint = [0.2, 0.5]\nlambda = [1, 0.3]\n[[spectral]]\npoint = [-0.4, 0.3]\nlambda = [-0.5, 1]\n[[spectral]]\npoint = [0.05, 0.7]\nlambda = [0.4, -0.8]\n[grid]\nnx = 11\nnt = 11\n",
    );
    let out = run(&["crosscheck"], &three);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["comparisons"].as_array().unwrap().len(), 1);
}
