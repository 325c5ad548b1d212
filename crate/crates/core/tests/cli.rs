use std::process::Command;

fn genint(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_genint")).args(args).env_remove("GENINT_TOL").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(genint(&["--help"]).0, 0);
    assert_eq!(genint(&["--version"]).0, 0);
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = genint(&["integrate", "--integrand", "bessel-product", "--alpha", "0.3"]);
    assert_eq!(code, 1);
    assert!(err.contains("cli.usage"), "{err}");
    assert_eq!(genint(&["sigma"]).0, 1);
    assert_eq!(genint(&["eval", "--fn", "nope"]).0, 1);
}

#[test]
fn invalid_environment_tolerance_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_genint"))
        .args(["sigma", "--dim-range", "3..3", "--beta", "1"])
        .env("GENINT_TOL", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn passing_suite_exits_zero() {
    let (code, out, _) = genint(&["verify", "--suite", "sigma"]);
    assert_eq!(code, 0);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true);
        assert!(v["tolerance"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["table", "--formula", "geg2", "--samples", "3", "--seed", "7", "--format", "csv"];
    let (a, b) = (genint(&args), genint(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_eq!(a.1.lines().count(), 4);
    let other = genint(&["table", "--formula", "geg2", "--samples", "3", "--seed", "8", "--format", "csv"]);
    assert_ne!(a.1, other.1);
}

#[test]
fn sigma_in_three_dimensions() {
    let (code, out, _) = genint(&["sigma", "--dim-range", "3..3", "--beta", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!((v["sigma"].as_f64().unwrap() - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-16);
}

#[test]
fn numeric_errors_surface_in_rows() {
    let (code, out, _) = genint(&["green", "--geometry", "euclidean", "--dim", "3", "--beta", "1", "--gamma", "0", "--along", "0:1:2", "--source", "0"]);
    assert_eq!(code, 0);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert!(first["kernel"].is_null());
    assert!(first["error"].as_str().unwrap().starts_with("pointgreen."));
}
