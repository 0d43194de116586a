use std::process::Command;

use kdv_drift::cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kdv-drift").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .to_owned()
}

fn real(text: &str, key: &str) -> f64 {
    value(text, key).parse().unwrap()
}

#[test]
fn classify_reports_regimes() {
    let (code, out) = call(&["classify", "--m", "0.9", "--V", "0.1", "--c", "1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "regime"), "resonance-wedge");
    assert_eq!(value(&out, "k"), "");
    let (_, out) = call(&["classify", "--m", "0.9", "--V", "1.3333333", "--c", "1"]);
    assert_eq!(value(&out, "regime"), "amenable");
    assert!(real(&out, "k") > 0.0);
    let (_, out) = call(&["classify", "--m", "0", "--V", "2", "--c", "1"]);
    assert!((real(&out, "k") - 1.0 / 18.0).abs() < 1e-15);
}

#[test]
fn invalid_parameters_exit_with_two() {
    assert_eq!(call(&["classify", "--m", "1.5", "--V", "0"]).0, 2);
    assert_eq!(call(&["drift", "--m", "0.5"]).0, 2);
    assert_eq!(call(&["sweep", "--m-range", "0,1.2,4"]).0, 2);
}

#[test]
fn drift_examples() {
    let (_, out) = call(&["drift", "--m", "0.5", "--V", "50", "--c", "1", "--method", "closed"]);
    let ratio = real(&out, "v_drift") / real(&out, "v");
    assert!((ratio * 3.0 - 1.0).abs() < 0.05, "{ratio}");
    let (_, out) = call(&["drift", "--m", "0.9", "--V", "-0.3333", "--c", "1"]);
    assert_eq!(value(&out, "regime"), "locked");
    assert_eq!(real(&out, "v_drift"), real(&out, "v"));
    let (code, out) = call(&["drift", "--m", "0.9", "--V", "1.3333", "--c", "1", "--method", "both"]);
    assert_eq!(code, 0);
    assert!(real(&out, "discrepancy") < 1e-5);
}

#[test]
fn unconverged_rotation_number_exits_with_three() {
    let dir = std::env::temp_dir().join(format!("kdv-cli-{}.conf", std::process::id()));
    std::fs::write(&dir, "rotation_tol = 1e-300\n").unwrap();
    let (code, out) = call(&["drift", "--m", "0.9", "--V", "1.3333", "--method", "ode", "--config", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(code, 3);
    assert_eq!(value(&out, "status"), "no-convergence");
    assert!(real(&out, "v_drift_ode_partial").is_finite());
}

#[test]
fn berry_velocity_vanishes_for_standing_wave() {
    let (code, out) = call(&["phases", "--m", "0.5", "--V", "0", "--c", "1"]);
    assert_eq!(code, 0);
    assert_eq!(real(&out, "v_berry"), 0.0);
}

#[test]
fn phases_sum_to_drift() {
    let (_, out) = call(&["phases", "--m", "0.7", "--V", "1.5", "--json"]);
    let obj: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let sum = obj["sum"].as_f64().unwrap();
    let drift = obj["v_drift"].as_f64().unwrap();
    assert!((sum - drift).abs() < 1e-12);
}

#[test]
fn flags_override_config() {
    let dir = std::env::temp_dir().join(format!("kdv-cli-c-{}.conf", std::process::id()));
    std::fs::write(&dir, "# defaults\nc = 2\n").unwrap();
    let path = dir.to_str().unwrap();
    let (_, from_file) = call(&["classify", "--m", "0", "--V", "2", "--config", path]);
    let (_, overridden) = call(&["classify", "--m", "0", "--V", "2", "--config", path, "--c", "1"]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(real(&from_file, "c"), 2.0);
    assert_eq!(real(&overridden, "c"), 1.0);
}

#[test]
fn sweep_is_deterministic_and_recomputable() {
    let args = ["sweep", "--m-range", "0,0.9,7", "--V-range", "-1.5,2.5,9"];
    let (_, a) = call(&args);
    let (_, b) = call(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "m,V,regime,k,v,v_drift,v_dyn,v_berry,v_anom,error");
    assert_eq!(lines.len(), 64);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert!(!line.contains("NaN"));
        let (_, single) = call(&["drift", "--m", cells[0], "--V", cells[1]]);
        assert_eq!(cells[5].parse::<f64>().unwrap(), real(&single, "v_drift"));
    }
}

fn rows(csv: &str) -> Vec<(f64, f64)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let (t, x) = l.split_once(',').unwrap();
            (t.parse().unwrap(), x.parse().unwrap())
        })
        .collect()
}

#[test]
fn trajectory_methods_agree() {
    let base = ["trajectory", "--m", "0.9", "--V", "1.3333", "--x0", "0.5", "--samples", "10", "--periods", "3"];
    let (code, exact) = call(&[&base[..], &["--method", "exact"]].concat());
    assert_eq!(code, 0);
    let (_, ode) = call(&[&base[..], &["--method", "ode"]].concat());
    let (a, b) = (rows(&exact), rows(&ode));
    assert_eq!(a.len(), 31);
    assert_eq!(a[0], (0.0, 0.5));
    for (p, q) in a.iter().zip(&b) {
        assert_eq!(p.0, q.0);
        assert!((p.1 - q.1).abs() < 1e-7, "{p:?} {q:?}");
    }
    let (_, locked) = call(&["trajectory", "--m", "0.9", "--V", "0.1"]);
    assert_eq!(rows(&locked).len(), 101);
}

#[test]
fn simulate_writes_checkpoint() {
    let path = std::env::temp_dir().join(format!("kdv-cli-{}.ck", std::process::id()));
    let (code, out) = call(&[
        "simulate", "--m", "0.9", "--V", "1.3333333333333333", "--n", "128", "--steps", "1024",
        "--checkpoint", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(real(&out, "travelling_error") < 1e-6);
    let state = kdv_drift::spectral::read_checkpoint(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(state.n, 128);
    assert!((state.t - real(&out, "period")).abs() < 1e-9);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kdv-drift");
    let ok = Command::new(bin).args(["verify", "--suite", "identities"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("failures=0"));
    let bad = Command::new(bin).args(["classify", "--m", "-0.5", "--V", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
