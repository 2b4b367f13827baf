use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swkb-lab")).args(args).env_remove("SWKB_LAB_THREADS").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Body of a CSV report with the manifest line dropped.
fn csv_body(text: &str) -> &str {
    assert!(text.starts_with("# manifest: "), "missing manifest line");
    text.split_once('\n').unwrap().1
}

fn column(body: &str, name: &str) -> Vec<String> {
    let mut lines = body.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn catalog_lists_all_entries() {
    let out = lab(&["catalog", "list", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let text = v.to_string();
    for name in ["harmonic", "morse", "coulomb", "eckart_like", "radial_oscillator", "scarf_I", "perturbed_harmonic"] {
        assert!(text.contains(name), "{name} missing");
    }
    assert_eq!(code(&lab(&["catalog", "list", "--name", "nosuch"])), 2);
}

#[test]
fn verify_harmonic_passes() {
    let out = lab(&["verify", "--potential", "harmonic", "--n", "0..10"]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    let residuals = column(csv_body(&body), "residual");
    assert_eq!(residuals.len(), 11);
    for r in residuals {
        assert!(r.parse::<f64>().unwrap().abs() < 1e-10);
    }
}

#[test]
fn verify_perturbed_control_fails() {
    assert_eq!(code(&lab(&["verify", "--potential", "perturbed_harmonic", "--n", "1..5"])), 1);
}

#[test]
fn verify_ground_state_is_zero() {
    let out = lab(&["verify", "--potential", "coulomb", "--n", "0..0"]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    assert_eq!(column(csv_body(&body), "integral"), ["0.0000000000000000e0"]);
}

#[test]
fn verify_rejects_levels_past_the_bound_states() {
    assert_eq!(code(&lab(&["verify", "--potential", "morse", "--n", "0..5"])), 2);
    assert_eq!(code(&lab(&["verify", "--potential", "harmonic", "--n", "3..1"])), 2);
}

#[test]
fn verify_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let out = lab(&["verify", "--potential", "morse", "--n", "1..2", "--plot-data", plot.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&plot).unwrap();
    assert!(text.starts_with("n,x,integrand\n"));
    assert!(text.lines().count() > 2);
}

#[test]
fn si_check_exit_codes() {
    assert_eq!(code(&lab(&["si-check", "--potential", "harmonic"])), 0);
    assert_eq!(code(&lab(&["si-check", "--potential", "perturbed_harmonic"])), 1);
    assert_eq!(code(&lab(&["si-check", "--potential", "harmonic", "--x-range", "2,1"])), 2);
    assert_eq!(code(&lab(&["si-check", "--potential", "coulomb", "--x-range", "-1,2"])), 2);
}

#[test]
fn sweep_scales_with_hbar() {
    let out = lab(&["sweep", "--potential", "harmonic", "--hbar", "0.5,1,2", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    for v in column(csv_body(&body), "integral_over_hbar") {
        assert!((v.parse::<f64>().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-10);
    }

    let out = lab(&["sweep", "--potential", "harmonic", "--n", "0"]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    for v in column(csv_body(&body), "integral") {
        assert_eq!(v.parse::<f64>().unwrap(), 0.0);
    }

    assert_eq!(code(&lab(&["sweep", "--potential", "perturbed_harmonic", "--n", "2"])), 1);
}

#[test]
fn oracle_compare_exit_codes() {
    assert_eq!(code(&lab(&["oracle-compare", "--potential", "harmonic", "--eigen-count", "5"])), 0);
    assert_eq!(code(&lab(&["oracle-compare", "--potential", "morse", "--eigen-count", "3", "--box", "-2,4"])), 1);
    assert_eq!(code(&lab(&["oracle-compare", "--potential", "harmonic", "--eigen-count", "0"])), 2);
}

#[test]
fn spectrum_columns() {
    let out = lab(&["spectrum", "--potential", "harmonic", "--n-max", "3"]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    let body = csv_body(&body);
    assert_eq!(body.lines().next().unwrap(), "name,class,n,E_n,dE_dhbar");
    let energies: Vec<f64> = column(body, "E_n").iter().map(|e| e.parse().unwrap()).collect();
    assert_eq!(energies, [0.0, 2.0, 4.0, 6.0]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--potential", "eckart_like", "--n", "0..3"];
    let a = stdout(&lab(&args));
    let b = stdout(&lab(&args));
    assert_eq!(csv_body(&a), csv_body(&b));
}

fn replay(report: &Path) -> Output {
    lab(&["replay", report.to_str().unwrap()])
}

#[test]
fn replay_reproduces_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("verify.csv");
    let out = lab(&["verify", "--potential", "radial_oscillator", "--n", "0..4", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&replay(&csv)), 0);

    let json = dir.path().join("si.json");
    let out = lab(&["si-check", "--potential", "scarf_I", "--format", "json", "--out", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&replay(&json)), 0);

    let tampered = dir.path().join("tampered.csv");
    let text = std::fs::read_to_string(&csv).unwrap().replace("radial_oscillator,IIIa,1,", "radial_oscillator,IIIa,9,");
    std::fs::write(&tampered, text).unwrap();
    assert_eq!(code(&replay(&tampered)), 1);

    let garbage = dir.path().join("garbage.txt");
    std::fs::write(&garbage, "not a report").unwrap();
    assert_eq!(code(&replay(&garbage)), 2);
}

#[test]
fn thread_count_must_be_positive() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_swkb-lab"))
            .args(["spectrum", "--potential", "harmonic"])
            .env("SWKB_LAB_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("abc")), 2);
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("2")), 0);
}
