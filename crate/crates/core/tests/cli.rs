use std::path::Path;
use std::process::{Command, Output};

fn ccenum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccenum"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn complete_run_exits_zero_and_writes_a_verifiable_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k2.json");
    let csv = dir.path().join("k2.csv");
    let o = ccenum(&[
        "aniso-enumerate",
        "--k",
        "2",
        "--a",
        "0.75",
        "--b",
        "2.25",
        "--equal-masses",
        "true",
        "--out",
        path(&out),
        "--emit-plot-data",
        path(&csv),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("COMPLETE"));
    assert!(std::fs::read_to_string(&csv).unwrap().lines().count() > 4);

    let v = ccenum(&["verify", path(&out)]);
    assert_eq!(code(&v), 0, "{}", text(&v));
    assert!(text(&v).contains("verified 4 certificates, 0 failed"));
}

#[test]
fn budget_exhaustion_exits_two() {
    let o = ccenum(&[
        "aniso-enumerate",
        "--k",
        "3",
        "--a",
        "0.75",
        "--b",
        "2.25",
        "--equal-masses",
        "true",
        "--max-boxes",
        "50",
    ]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    assert!(text(&o).contains("INCOMPLETE"));
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "k = 2\na = 0.75\nb = 2.25\nequal_masses = true\nmax_boxes = 10\n",
    )
    .unwrap();
    let small = ccenum(&["aniso-enumerate", "--config", path(&cfg)]);
    assert_eq!(code(&small), 2, "{}", text(&small));
    let big = ccenum(&[
        "aniso-enumerate",
        "--config",
        path(&cfg),
        "--max-boxes",
        "100000",
    ]);
    assert_eq!(code(&big), 0, "{}", text(&big));
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "k = 2\na = 0.75\nb = 2.25\nequal_masses = true\nmax_boxs = 10\n",
    )
    .unwrap();
    let o = ccenum(&["aniso-enumerate", "--config", path(&cfg)]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("max_boxs"), "{}", text(&o));
}

#[test]
fn bad_values_exit_one() {
    let missing_masses = ccenum(&["aniso-enumerate", "--k", "2", "--a", "0.75", "--b", "2.25"]);
    assert_eq!(code(&missing_masses), 1);
    assert!(text(&missing_masses).contains("masses"));

    let bad_pruning = ccenum(&[
        "aniso-enumerate",
        "--k",
        "2",
        "--a",
        "0.75",
        "--b",
        "2.25",
        "--equal-masses",
        "true",
        "--pruning",
        "none",
    ]);
    assert_eq!(code(&bad_pruning), 1);
    assert!(text(&bad_pruning).contains("pruning"));

    let degenerate = ccenum(&[
        "aniso-enumerate",
        "--k",
        "2",
        "--a",
        "1",
        "--b",
        "1",
        "--equal-masses",
        "true",
    ]);
    assert_eq!(code(&degenerate), 1);

    assert_eq!(code(&ccenum(&["no-such-command"])), 1);
    assert_eq!(code(&ccenum(&["--help"])), 0);
}

#[test]
fn analytic_rhombus_reports_the_diagonal_ratio() {
    let o = ccenum(&[
        "analytic", "--family", "rhombus", "--k", "4", "--a", "0.75", "--b", "2.25",
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("0.39827"), "{}", text(&o));
}

#[test]
fn tampered_report_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k2.json");
    let o = ccenum(&[
        "aniso-enumerate",
        "--k",
        "2",
        "--a",
        "0.75",
        "--b",
        "2.25",
        "--equal-masses",
        "true",
        "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0);
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let mid = &mut v["payload"]["certificates"][0]["midpoint"][0];
    *mid = serde_json::Value::String("0x1.8p+0".into());
    std::fs::write(&out, serde_json::to_string(&v).unwrap()).unwrap();
    let r = ccenum(&["verify", path(&out)]);
    assert_eq!(code(&r), 2, "{}", text(&r));
    assert!(text(&r).contains("1 failed"));
}

#[test]
fn compare_refuses_mismatched_runs() {
    let dir = tempfile::tempdir().unwrap();
    let phu = dir.path().join("k2.json");
    let pgu = dir.path().join("n.json");
    let o = ccenum(&[
        "aniso-enumerate",
        "--k",
        "2",
        "--a",
        "0.75",
        "--b",
        "2.25",
        "--equal-masses",
        "true",
        "--out",
        path(&phu),
    ]);
    assert_eq!(code(&o), 0);
    // One light body cannot pair with a two-body limit problem.
    let o = ccenum(&[
        "nbody-enumerate",
        "--light-masses",
        "1e-3",
        "--heavy-masses",
        "0.4995,0.4995",
        "--light-x=-0.2,0.2",
        "--light-y",
        "0.7,1.0",
        "--heavy-x",
        "0.45,0.55",
        "--out",
        path(&pgu),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let c = ccenum(&["compare", path(&pgu), path(&phu)]);
    assert_eq!(code(&c), 1, "{}", text(&c));
    let swapped = ccenum(&["compare", path(&phu), path(&pgu)]);
    assert_eq!(code(&swapped), 1);
}
