//! End-to-end tests of the command-line front end: golden values, exit
//! codes, CSV shape, and determinism.

use std::f64::consts::SQRT_2;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("holderkit").chain(args.iter().copied());
    let code = holderkit::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// CSV body rows (header comment and column names stripped).
fn csv_rows(stdout: &str) -> Vec<Vec<String>> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn value_of<'a>(rows: &'a [Vec<String>], name: &str) -> &'a Vec<String> {
    rows.iter()
        .find(|r| r[0] == name)
        .unwrap_or_else(|| panic!("no row named {name}"))
}

#[test]
fn velocity_reports_the_arcsine_value() {
    let (code, out, _) = run(&[
        "velocity",
        "--expr",
        "asin(1-x)",
        "--at",
        "0",
        "--beta",
        "0.5",
        "--dir",
        "fwd",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0, "stdout: {out}");
    let rows = csv_rows(&out);
    let row = value_of(&rows, "velocity");
    let v: f64 = row[1].parse().unwrap();
    assert!((v + SQRT_2).abs() < 1e-3, "velocity {v}");
    assert_eq!(row[2], "converged");
}

#[test]
fn velocity_exit_codes_follow_convergence() {
    let (code, out, _) = run(&[
        "velocity", "--expr", "x^3", "--at", "0", "--beta", "0.5", "--output", "csv",
    ]);
    assert_eq!(code, 0);
    let v: f64 = csv_rows(&out)[0][1].parse().unwrap();
    assert!(v.abs() < 1e-9);

    let (code, out, err) = run(&[
        "velocity", "--expr", "x^0.3", "--at", "0", "--beta", "0.5", "--output", "csv",
    ]);
    assert_eq!(code, 2);
    assert!(out.contains("diverged"), "stdout: {out}");
    assert!(err.contains("did not converge"), "stderr: {err}");
}

#[test]
fn expand_matches_the_arcsine_series() {
    let (code, out, _) = run(&[
        "expand",
        "--expr",
        "asin(1-x)",
        "--at",
        "0",
        "--alpha",
        "0.5",
        "--n",
        "4",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    let expected = [
        -SQRT_2,
        -1.0 / (3.0 * 2f64.powf(1.5)),
        -3.0 / (5.0 * 2f64.powf(4.5)),
        -5.0 / (7.0 * 2f64.powf(6.5)),
        -35.0 / (9.0 * 2f64.powf(10.5)),
    ];
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row[0], k.to_string());
        let exponent: f64 = row[1].parse().unwrap();
        let c: f64 = row[2].parse().unwrap();
        assert!((exponent - (k as f64 + 0.5)).abs() < 1e-15);
        assert!(
            (c - expected[k]).abs() < 1e-6,
            "c_{k} = {c}, expected {}",
            expected[k]
        );
        assert_eq!(row[3], "converged");
    }
}

#[test]
fn expand_compound_builds_the_cosine_ladder() {
    let third = 1.0 / 3.0;
    let (code, out, _) = run(&[
        "expand",
        "--compound",
        "cos",
        "--at",
        "0",
        "--alpha",
        &third.to_string(),
        "--n",
        "4",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    // The constant g(0) = 1 lives in the series base value, not in c_0,
    // whose exponent 0·alpha would collide with it.
    let expected = [0.0, 0.0, -0.5, 0.0, 1.0 / 24.0];
    for (k, row) in rows.iter().enumerate() {
        let exponent: f64 = row[1].parse().unwrap();
        let c: f64 = row[2].parse().unwrap();
        assert!((exponent - k as f64 * third).abs() < 1e-15);
        assert!((c - expected[k]).abs() < 1e-12, "c_{k} = {c}");
    }
}

#[test]
fn errorcurve_stays_at_rounding_on_exact_powers() {
    let (code, out, _) = run(&[
        "errorcurve",
        "--expr",
        "x^0.5",
        "--at",
        "0",
        "--alpha",
        "0.5",
        "--n",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# holderkit errorcurve"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 64);
    for row in &rows {
        let e: f64 = row[1].parse().unwrap();
        assert!(e < 1e-12, "error {e}");
    }
}

#[test]
fn csv_output_is_byte_deterministic() {
    let args = [
        "velocity",
        "--expr",
        "asin(1-x)",
        "--beta",
        "0.5",
        "--tol",
        "1e-7",
        "--output",
        "csv",
    ];
    let (_, first, _) = run(&args);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn regularize_recovers_the_golden_example() {
    let (code, out, _) = run(&[
        "regularize",
        "--expr",
        "x + sqrt(x)",
        "--at",
        "0",
        "--beta",
        "0.5",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    let kernel: f64 = value_of(&rows, "kernel")[1].parse().unwrap();
    let reg: f64 = value_of(&rows, "regularized")[1].parse().unwrap();
    assert!((kernel - 1.0).abs() < 1e-9);
    assert!((reg - 1.0).abs() < 1e-6);
}

#[test]
fn exponent_detects_the_grade() {
    let (code, out, _) = run(&[
        "exponent",
        "--expr",
        "abs(x)^0.3",
        "--at",
        "0",
        "--dir",
        "fwd",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    let alpha: f64 = value_of(&rows, "alpha_hat")[1].parse().unwrap();
    assert!((alpha - 0.3).abs() < 0.02, "alpha_hat {alpha}");
}

#[test]
fn ito_prints_both_routes() {
    let (code, out, _) = run(&[
        "ito",
        "--f",
        "w^2/2",
        "--w",
        "sqrt(x)",
        "--at",
        "0",
        "--dir",
        "fwd",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    let assembled: f64 = value_of(&rows, "assembled")[1].parse().unwrap();
    let direct: f64 = value_of(&rows, "direct")[1].parse().unwrap();
    assert!((assembled - 0.5).abs() < 1e-4);
    assert!((direct - 0.5).abs() < 1e-4);
}

#[test]
fn dir_both_prints_the_duality() {
    let (code, out, _) = run(&[
        "velocity",
        "--expr",
        "abs(x)^0.5",
        "--at",
        "0",
        "--beta",
        "0.5",
        "--dir",
        "both",
        "--output",
        "csv",
    ]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    let f: f64 = value_of(&rows, "forward_velocity")[1].parse().unwrap();
    let b: f64 = value_of(&rows, "backward_velocity")[1].parse().unwrap();
    let d: f64 = value_of(&rows, "agreement_delta")[1].parse().unwrap();
    assert!((f - 1.0).abs() < 1e-9);
    assert!((b + 1.0).abs() < 1e-9);
    assert!((d - 2.0).abs() < 1e-9);
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 1);

    let (code, _, err) = run(&["velocity", "--expr", "x +", "--beta", "0.5"]);
    assert_eq!(code, 1);
    assert!(err.contains("holderkit:"), "stderr: {err}");

    let (code, _, _) = run(&[
        "errorcurve",
        "--expr",
        "x^0.5",
        "--alpha",
        "0.5",
        "--grid-points",
        "0",
    ]);
    assert_eq!(code, 1);

    let (code, _, _) = run(&["ito", "--f", "w^2/2"]);
    assert_eq!(code, 1);

    // Domain failures are input errors, not convergence failures.
    let (code, _, _) = run(&["velocity", "--expr", "ln(x)", "--at", "-5", "--beta", "0.5"]);
    assert_eq!(code, 1);
}

#[test]
fn tolerance_env_var_is_honored() {
    std::env::set_var("HOLDERKIT_TOL", "2.5e-7");
    let (_, out, _) = run(&[
        "velocity", "--expr", "asin(1-x)", "--beta", "0.5", "--output", "csv",
    ]);
    assert!(out.contains("--tol 0.00000025"), "header: {out}");

    // An explicit flag beats the environment.
    let (_, out, _) = run(&[
        "velocity", "--expr", "asin(1-x)", "--beta", "0.5", "--tol", "1e-6", "--output", "csv",
    ]);
    assert!(out.contains("--tol 0.000001"), "header: {out}");
    std::env::remove_var("HOLDERKIT_TOL");
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join("holderkit-cli-test-velocity.csv");
    let (code, out, _) = run(&[
        "velocity",
        "--expr",
        "x^0.5",
        "--beta",
        "0.5",
        "--output",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("# holderkit velocity"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("velocity"));
    assert!(out.contains("regularize"));
}
