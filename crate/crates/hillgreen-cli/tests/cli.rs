//! End-to-end runs of the binary: output schemas, determinism, and the
//! exit-code contract (0 pass, 1 check failed, 2 resonant, 3 hypothesis
//! violated, 4 not found, 5 I/O, 64 usage).

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hillgreen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout parses as JSON")
}

#[test]
fn eigen_locates_the_dirichlet_eigenvalue_of_the_free_operator() {
    let out = run(&["--potential", "inline:constant:0", "eigen", "--bc", "dirichlet"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["bc"], "dirichlet");
    let lambda0 = v["lambda0"].as_f64().unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((lambda0 - pi2).abs() < 1e-6, "lambda0 {lambda0}");
    assert!(v["char_residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn resonant_kernels_are_refused_with_exit_2() {
    let out = run(&["green", "build", "--bc", "periodic", "--potential", "inline:constant:0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("resonant"), "stderr: {}", stderr(&out));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["--nope"])), 64);
    assert_eq!(code(&run(&["verify", "identity"])), 64, "needs --id or --all");
    assert_eq!(code(&run(&["green", "eval", "--bc", "dirichlet", "--t", "0.5", "--s", "0.5", "--side", "middle"])), 64);
    assert_eq!(code(&run(&["eigen", "--bc", "nonsense"])), 64);
    assert_eq!(code(&run(&["--potential", "inline:spline:1", "fundamental"])), 64);
}

#[test]
fn empty_search_windows_exit_4() {
    let out = run(&[
        "--potential", "inline:constant:0",
        "eigen", "--bc", "dirichlet", "--lambda-min", "5", "--lambda-max", "8",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("not found"));
}

#[test]
fn identity_verification_is_deterministic_and_complete() {
    let args = ["verify", "identity", "--all"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "reruns must be byte-identical");

    let v = json(&first);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 36);
    for e in entries {
        assert_eq!(e["status"], "ok", "entry {e}");
        assert_eq!(e["pass"], true, "entry {e}");
        assert!(e["residual"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn single_identity_lookup_returns_one_object() {
    let out = run(&["verify", "identity", "--id", "P_from_D_alt"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["identity"], "P_from_D_alt");
    assert_eq!(v["status"], "ok");
}

#[test]
fn sign_chains_hold_for_the_default_potential() {
    let out = run(&["verify", "signs"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let chains = v.as_array().unwrap();
    assert_eq!(chains.len(), 6);
    for e in chains {
        assert_eq!(e["holds"], true, "chain {e}");
    }
}

#[test]
fn green_eval_matches_the_triangle_kernel() {
    let out = run(&[
        "--potential", "inline:constant:0",
        "green", "eval", "--bc", "dirichlet", "--t", "0.7", "--s", "0.2",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["g"].as_f64().unwrap() + 0.06).abs() < 1e-9);
    assert!((v["dg_dt"].as_f64().unwrap() - 0.2).abs() < 1e-9);
    assert!((v["dg_ds"].as_f64().unwrap() + 0.3).abs() < 1e-9);

    // The diagonal keeps both lateral derivatives; the sides differ by the
    // unit jump.
    let lower = run(&[
        "--potential", "inline:constant:0",
        "green", "eval", "--bc", "dirichlet", "--t", "0.5", "--s", "0.5", "--side", "lower",
    ]);
    let upper = run(&[
        "--potential", "inline:constant:0",
        "green", "eval", "--bc", "dirichlet", "--t", "0.5", "--s", "0.5", "--side", "upper",
    ]);
    let dl = json(&lower)["dg_dt"].as_f64().unwrap();
    let du = json(&upper)["dg_dt"].as_f64().unwrap();
    assert!((dl + 0.5).abs() < 1e-9, "lower slope {dl}");
    assert!((du - 0.5).abs() < 1e-9, "upper slope {du}");
}

#[test]
fn green_table_is_a_csv_grid() {
    let out = run(&["green", "table", "--bc", "dirichlet", "--grid", "5", "--out", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,s,G,dGdt,dGds"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn zeros_counts_oscillations() {
    let out = run(&[
        "--potential", "inline:constant:0",
        "--lambda", "19.739208802178716",
        "zeros", "--basis", "r1",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["zeros"], 1);
    assert_eq!(v["bc"], "dirichlet");
}

#[test]
fn solve_reaches_the_dirichlet_fixed_point() {
    let out = run(&["nonlinear", "solve", "--c", "0.3", "--bc", "dirichlet"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let sup = v["sup_norm"].as_f64().unwrap();
    assert!((sup - 0.05358350).abs() < 1e-6, "sup_norm {sup}");
    let iters = v["iterations"].as_u64().unwrap();
    assert!((5..=8).contains(&iters), "iterations {iters}");
}

#[test]
fn non_contractions_exit_3() {
    let solve = run(&["nonlinear", "solve", "--c", "0.6", "--bc", "periodic"]);
    assert_eq!(code(&solve), 3);
    assert!(stderr(&solve).contains("not a contraction"));

    // Same gate at the distance level: K1 >= 1 breaks the hypothesis.
    let distance = run(&["nonlinear", "distance", "--c", "0.6"]);
    assert_eq!(code(&distance), 3);
}

#[test]
fn distance_check_passes_at_the_worked_scale() {
    let out = run(&["nonlinear", "distance", "--c", "0.3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["distance_within_bound"], true);
    assert_eq!(v["corollary_brackets"], true);
    let measured = v["measured_distance"].as_f64().unwrap();
    assert!((measured - 0.48450877).abs() < 1e-6);
}

#[test]
fn example_table_reports_the_known_mismatch() {
    let csv = run(&["nonlinear", "example", "--out", "csv"]);
    assert_eq!(code(&csv), 1, "the P_dirichlet row cannot match");
    let text = stdout(&csv);
    assert!(text.starts_with("quantity,computed,paper,rel_err\n"));
    assert!(text.contains("\nP_dirichlet,"));
    assert_eq!(text.lines().count(), 18);

    let jsn = run(&["nonlinear", "example"]);
    assert_eq!(code(&jsn), 1);
    let v = json(&jsn);
    assert_eq!(v["all_pass"], false);
    let failing: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| r["quantity"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["P_dirichlet"]);
}

#[test]
fn reproduce_all_flags_only_the_known_row() {
    let out = run(&["reproduce-all"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let failures: Vec<&str> = text.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(
        failures.len(),
        1,
        "only the published P_dirichlet value may fail:\n{text}"
    );
    assert!(failures[0].contains("example table P_dirichlet"));
    assert!(text.trim_end().ends_with("1 failed"));
}

#[test]
fn potential_files_load_and_missing_ones_exit_5() {
    let dir = std::env::temp_dir();
    let path = dir.join("hillgreen_cli_sine_potential.json");
    std::fs::write(&path, r#"{"kind":"sine","c0":-2.0,"amp":1.0,"freq":1.0}"#).unwrap();
    let out = run(&["--potential", path.to_str().unwrap(), "eigen", "--bc", "neumann"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let lambda0 = json(&out)["lambda0"].as_f64().unwrap();
    assert!((1.0..3.0).contains(&lambda0), "lambda0 {lambda0}");
    std::fs::remove_file(&path).ok();

    let missing = run(&["--potential", "/no/such/potential.json", "fundamental"]);
    assert_eq!(code(&missing), 5);
}

#[test]
fn output_flag_writes_the_file_instead_of_stdout() {
    let path = std::env::temp_dir().join("hillgreen_cli_eigen_out.json");
    let out = run(&[
        "--potential", "inline:constant:0",
        "eigen", "--bc", "dirichlet",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["bc"], "dirichlet");
    std::fs::remove_file(&path).ok();
}

#[test]
fn csv_format_covers_the_scalar_reports() {
    let eigen = run(&["--potential", "inline:constant:0", "eigen", "--bc", "dirichlet", "--out", "csv"]);
    assert!(stdout(&eigen).starts_with("bc,lambda0,char_residual\ndirichlet,"));

    let constants = run(&["nonlinear", "constants", "--c", "0.3", "--out", "csv"]);
    assert_eq!(code(&constants), 0);
    let text = stdout(&constants);
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.contains("\nk1,"));
    assert!(text.contains("\nbc_a,dirichlet\n"));
}
