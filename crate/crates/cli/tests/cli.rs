use saddlewalk_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["saddlewalk"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn last_line(s: &str) -> &str {
    s.lines().last().unwrap_or("")
}

#[test]
fn simulate_reports_stop_and_endpoint() {
    let (code, out, _) = run(&["simulate", "--x0", "0.3,0.4"]);
    assert_eq!(code, 0);
    assert_eq!(last_line(&out), "ConvergedToSaddle x*=0.000000,0.000000");
    assert!(out.starts_with("t,x_1,x_2,v_1,v_2,"));
}

#[test]
fn reduce_json_contains_fixed_points() {
    let (code, out, _) = run(&["reduce", "--format", "json"]);
    assert_eq!(code, 0);
    let body: String = out.lines().take(out.lines().count() - 1).collect::<Vec<_>>().join("\n");
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert!((v["r0"].as_f64().unwrap() - 0.8408964152537145).abs() < 1e-12);
    assert_eq!(v["stable_branch"], "plus");
    let lower_left = v["J_plus"][1][0].as_f64().unwrap();
    assert!((lower_left - 4.0 * std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-12);
}

#[test]
fn reduce_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let (code, _, _) = run(&["reduce", "--x0", "1.0,2.0", "--tmax", "5", "--traj", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.lines().count() > 10);
}

#[test]
fn unknown_model_is_invalid_input() {
    let (code, _, err) = run(&["simulate", "--model", "nosuch"]);
    assert_eq!(code, 2);
    assert!(err.contains("doublewell2d"), "{err}");
}

#[test]
fn dry_run_prints_resolved_config() {
    let (code, out, _) = run(&["cycle", "--dry-run", "--eps", "0.02"]);
    assert_eq!(code, 0);
    let line = last_line(&out);
    let json = line.strip_prefix("cycle ").unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["model"]["variant"], "IsotropicCanonical");
    assert_eq!(v["integrator"]["eps"], 0.02);
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"seed": 1, "bogus": true}"#).unwrap();
    let (code, _, err) = run(&["simulate", "--config", path.to_str().unwrap(), "--dry-run"]);
    assert_eq!(code, 2);
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"model": {"variant": "DoubleWell2D", "params": {"alpha": 2.0}}, "seed": 7}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["simulate", "--config", path.to_str().unwrap(), "--alpha", "6", "--dry-run"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(last_line(&out).strip_prefix("simulate ").unwrap()).unwrap();
    assert_eq!(v["model"]["params"]["alpha"], 6.0);
    assert_eq!(v["seed"], 7);
}

#[test]
fn portrait_writes_csv_and_legend() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basin.csv");
    let (code, out, _) = run(&["portrait", "--nx", "9", "--ny", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9 * 5);
    let legend = std::fs::read_to_string(dir.path().join("basin.csv.legend.json")).unwrap();
    assert!(legend.contains("ConvergedToSaddle"));
}

#[test]
fn singularities_on_coercive_model() {
    let (code, out, _) = run(&["singularities"]);
    assert_eq!(code, 0);
    let line = last_line(&out);
    assert!(line.starts_with("2 singularities"), "{line}");
    assert!(line.contains("StableSpiral"));
}

#[test]
fn certify_and_benchmark_pass() {
    let (code, out, _) = run(&["certify"]);
    assert_eq!(code, 0);
    assert!(last_line(&out).starts_with("PASS"));
    let (code, out, _) = run(&["benchmark", "--points", "9"]);
    assert_eq!(code, 0);
    assert_eq!(last_line(&out), "converged 9/9");
}

#[test]
fn check_derivs_passes_for_plane_model() {
    let (code, out, _) = run(&["check-derivs", "--model", "plane3d", "--points", "20"]);
    assert_eq!(code, 0);
    assert!(last_line(&out).starts_with("PASS"));
}

#[test]
fn invalid_eps_is_rejected() {
    let (code, _, _) = run(&["cycle", "--eps", "-1"]);
    assert_eq!(code, 2);
}
