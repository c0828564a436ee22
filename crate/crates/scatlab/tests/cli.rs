//! Behavior of the command-line front end: exit codes, output files, and the
//! byte-identical rerun contract.

use std::path::Path;
use std::process::{Command, Output};

fn scatlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatlab"))
        .args(args)
        .output()
        .expect("failed to launch binary")
}

fn write_sphere_shape(dir: &Path) -> String {
    let path = dir.join("sphere.json");
    let c = (4.0 * std::f64::consts::PI).sqrt();
    std::fs::write(
        &path,
        format!(r#"{{"L":0,"coeffs":[{{"l":0,"m":0,"c":{c:.17}}}]}}"#),
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn missing_shape_file_gives_input_not_found() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let result = scatlab(&[
        "forward",
        "--shape",
        "/nonexistent/shape.json",
        "--lambda",
        "2.0",
        "--order",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(12));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("input-not-found"), "stderr: {stderr}");
}

#[test]
fn bad_boundary_condition_gives_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = write_sphere_shape(tmp.path());
    let out = tmp.path().join("out");
    let result = scatlab(&[
        "forward", "--shape", &shape, "--lambda", "2.0", "--order", "4", "--bc", "robin",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(13));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = write_sphere_shape(tmp.path());
    let out1 = tmp.path().join("run1");
    let out2 = tmp.path().join("run2");
    for out in [&out1, &out2] {
        let result = scatlab(&[
            "cross-section",
            "--shape",
            &shape,
            "--lambda",
            "1.5,2.0",
            "--order",
            "6",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    }
    let a = std::fs::read(out1.join("cross_section.txt")).unwrap();
    let b = std::fs::read(out2.join("cross_section.txt")).unwrap();
    assert_eq!(a, b, "outputs differ between identical runs");
    assert!(out1.join("config.json").exists(), "resolved-config record missing");
}

#[test]
fn verify_emits_small_residuals() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = write_sphere_shape(tmp.path());
    let out = tmp.path().join("out");
    let result = scatlab(&[
        "verify", "--shape", &shape, "--lambda", "2.0", "--order", "10", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = std::fs::read_to_string(out.join("residuals.txt")).unwrap();
    for name in ["reciprocity", "lax-phillips ", "unitarity", "inverse-relation", "optical-theorem"]
    {
        let line = text
            .lines()
            .find(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("missing residual line '{name}'"));
        let value: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(value <= 5e-3, "{name} residual {value} too large");
    }
}

#[test]
fn phase_and_heat_produce_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = write_sphere_shape(tmp.path());
    let out = tmp.path().join("phase");
    let result = scatlab(&[
        "phase", "--shape", &shape, "--lambda", "1.0,2.0,3.0", "--order", "6", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = std::fs::read_to_string(out.join("phase.txt")).unwrap();
    assert!(text.contains("# method partial-wave"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);

    let hout = tmp.path().join("heat");
    let result = scatlab(&[
        "heat", "--shape", &shape, "--lambda", "40", "--out", hout.to_str().unwrap(),
        "--t-window", "0.02:0.08",
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = std::fs::read_to_string(hout.join("heat.txt")).unwrap();
    let vol_line = text.lines().find(|l| l.starts_with("# volume-estimate")).unwrap();
    let vol: f64 = vol_line.split_whitespace().last().unwrap().parse().unwrap();
    let exact = 4.0 * std::f64::consts::PI / 3.0;
    assert!((vol - exact).abs() / exact < 0.05, "volume estimate {vol}");
}

#[test]
fn synthesize_then_reconstruct_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = write_sphere_shape(tmp.path());
    let dout = tmp.path().join("data");
    let result = scatlab(&[
        "synthesize", "--shape", &shape, "--lambda", "2.0", "--order", "8", "--out",
        dout.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let rout = tmp.path().join("recon");
    let result = scatlab(&[
        "reconstruct",
        "--data",
        dout.join("cross_section.txt").to_str().unwrap(),
        "--linv",
        "0",
        "--order",
        "8",
        "--out",
        rout.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let recovered = std::fs::read_to_string(rout.join("recovered_shape.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&recovered).unwrap();
    let c = parsed["coeffs"][0]["c"].as_f64().unwrap();
    let radius = c / (4.0 * std::f64::consts::PI).sqrt();
    assert!((radius - 1.0).abs() < 1e-3, "recovered radius {radius}");
    assert!(rout.join("convergence_log.txt").exists());
    assert!(rout.join("model_cross_section.txt").exists());
}

#[test]
fn distinguish_reports_zero_for_identical_shapes() {
    let tmp = tempfile::tempdir().unwrap();
    let shape = write_sphere_shape(tmp.path());
    let out = tmp.path().join("out");
    let result = scatlab(&[
        "distinguish", "--shape", &shape, "--shape2", &shape, "--lambda", "2.0", "--order",
        "6", "--out", out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = std::fs::read_to_string(out.join("separation.txt")).unwrap();
    let sep: f64 = text
        .lines()
        .find(|l| l.starts_with("separation"))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(sep, 0.0);
}
