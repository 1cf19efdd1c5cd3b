//! End-to-end checks of the command-line front end: artifacts on disk,
//! deterministic output, and the documented exit codes.

use manifold_cert::io::planar_example_text;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_manifold-cert"))
}

fn write_planar(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("planar.txt");
    std::fs::write(&path, planar_example_text()).unwrap();
    path
}

#[test]
fn full_run_writes_all_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_planar(tmp.path());
    let out = tmp.path().join("out");
    let status = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "81", "--mode", "float", "--samples", "51", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    for name in [
        "certificate.json",
        "coefficients.csv",
        "samples_stable.csv",
        "samples_unstable.csv",
        "plot_manifolds.py",
    ] {
        assert!(out.join(name).exists(), "{name} missing");
    }

    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("certificate.json")).unwrap())
            .unwrap();
    let r = cert["r_theta"].as_f64().unwrap();
    assert!((0.021..=0.026).contains(&r));
    assert_eq!(cert["mode"], "float");
    assert_eq!(cert["n1"], 81);
    assert_eq!(cert["lambda"][0], -0.4);

    // sample files have a header plus the requested rows
    let stable = std::fs::read_to_string(out.join("samples_stable.csv")).unwrap();
    assert_eq!(stable.lines().count(), 52);
    assert!(stable.starts_with("t,z1,z2,err1,err2\n"));
}

#[test]
fn interval_mode_emits_interval_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_planar(tmp.path());
    let out = tmp.path().join("out");
    let status = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "20", "--mode", "interval", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("certificate.json")).unwrap())
            .unwrap();
    assert_eq!(cert["mode"], "interval");
    assert!(cert["Omega"].is_array(), "Omega stored as [lo, hi]");
    let omega = cert["Omega"].as_array().unwrap();
    assert!(omega[0].as_f64().unwrap() <= 0.2);
    assert!(omega[1].as_f64().unwrap() >= 0.2);

    let coeffs = std::fs::read_to_string(out.join("coefficients.csv")).unwrap();
    assert!(coeffs.starts_with("side,component,exponents,value_lo,value_hi\n"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_planar(tmp.path());
    let mut digests = Vec::new();
    for run in 0..2 {
        let out = tmp.path().join(format!("out{run}"));
        let status = bin()
            .args(["--input"])
            .arg(&input)
            .args(["--order", "30", "--samples", "33", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let mut blob = Vec::new();
        for name in [
            "certificate.json",
            "coefficients.csv",
            "samples_stable.csv",
            "samples_unstable.csv",
            "plot_manifolds.py",
        ] {
            blob.extend(std::fs::read(out.join(name)).unwrap());
        }
        digests.push(blob);
    }
    assert_eq!(digests[0], digests[1]);
}

#[test]
fn resonant_input_exits_3_without_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("resonant.txt");
    std::fs::write(
        &input,
        "dim_stable 2\ndim_unstable 1\nlambda -2.0 -1.0\nmu 1.0\nF 1 2 0 0 1.0\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let output = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "10", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(!out.join("certificate.json").exists());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("resonance"), "stderr: {stderr}");
}

#[test]
fn parse_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("bad.txt");
    std::fs::write(&input, "dim_stable 1\ndim_unstable 1\nlambda -0.4\nmu 1.5\nF 1 1 0 1.0\n")
        .unwrap();
    let output = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--out"])
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn float_resonance_is_inconclusive_under_intervals() {
    // 3 * (-0.1) rounds to -0.30000000000000004 in binary64, so this system
    // is exactly resonant in float arithmetic while the interval check can
    // only say the divisor straddles zero
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("near.txt");
    std::fs::write(
        &input,
        "dim_stable 2\ndim_unstable 1\nlambda -0.30000000000000004 -0.1\nmu 1.0\nF 1 2 0 0 1.0\n",
    )
    .unwrap();
    let float_run = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "8", "--mode", "float", "--out"])
        .arg(tmp.path().join("f"))
        .output()
        .unwrap();
    assert_eq!(float_run.status.code(), Some(3));
    let interval_run = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "8", "--mode", "interval", "--out"])
        .arg(tmp.path().join("i"))
        .output()
        .unwrap();
    assert_eq!(interval_run.status.code(), Some(4));
}

#[test]
fn small_order_run_stays_valid() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_planar(tmp.path());
    let out = tmp.path().join("out");
    let status = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "10", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("certificate.json")).unwrap())
            .unwrap();
    // a coarser run still certifies a radius in the same order of magnitude
    let r = cert["r_theta"].as_f64().unwrap();
    assert!(r > 0.005 && r < 0.1, "r_theta = {r}");
}

#[test]
fn with_g_flag_emits_normal_form_table() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_planar(tmp.path());
    let out = tmp.path().join("out");
    let status = bin()
        .args(["--input"])
        .arg(&input)
        .args(["--order", "12", "--with-G", "5", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(out.join("normal_form.csv")).unwrap();
    assert!(table.starts_with("component,exponents,value\n"));
    // the known mixed coefficient 2 beta_{1,(2)} = 10/17 appears
    let expect = format!("1,1 2,{}", 10.0f64 / 17.0);
    assert!(
        table.lines().any(|l| l == expect),
        "missing row '{expect}' in:\n{table}"
    );
}
