//! End-to-end exercises of the command-line surface: argument parsing, exit
//! codes, and file outputs.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_telefid")
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(bin()).args(args).output().expect("spawn telefid")
}

#[test]
fn measure_bell_reports_unit_correlations() {
    let out = run(&["measure", "bell"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tf           = 1.00000000000e0"));
    assert!(text.contains("cc           = ") && text.contains("concurrence  = 1.00000000000e0"));
}

#[test]
fn measure_known_values() {
    let out = run(&["measure", "rho_d:0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("concurrence  = 7.07106781187e-1"));

    let out = run(&["measure", "rho_dd:1.0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cc           = 0.00000000000e0"));
    assert!(text.contains("tf           = 6.66666666667e-1"));

    // Post-selected states also report the branch probability.
    let out = run(&["measure", "sigma_r:0.5,0.1,0.0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("success_prob = 9.50000000000e-1"));
}

#[test]
fn measure_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["measure", "rho_dd:0.5", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((value["fef"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert!((value["tf"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn malformed_state_spec_is_a_usage_error() {
    for bad in ["nope", "rho_d:", "rho_d:2.5", "sigma_r:0.5,0.1", "rho_d:abc"] {
        let out = run(&["measure", bad]);
        assert_eq!(out.status.code(), Some(2), "spec '{bad}' should exit 2");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains("state spec must be one of"), "no usage text for '{bad}'");
    }
}

#[test]
fn unknown_flags_exit_with_usage_code() {
    let out = run(&["sweep", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_validation_errors_exit_with_usage_code() {
    let out = run(&[
        "sweep", "--scenario", "7", "--steps", "5", "--out", "/tmp/never-written.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "sweep", "--scenario", "1", "--steps", "1", "--out", "/tmp/never-written.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_io_code() {
    let out = run(&[
        "sweep", "--scenario", "1", "--steps", "3",
        "--out", "/proc/definitely/not/writable.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_csv_schema_and_threshold_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1.csv");
    let out = run(&[
        "sweep", "--scenario", "1", "--steps", "201",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,variant,d,p,q_star,concurrence,fef,tf,entropy_a,entropy_b,entropy_ab,\
         mutual_info,cc,cc_theta,cc_phi,success_prob"
            .replace(' ', "")
    );
    assert_eq!(lines.len(), 202);

    // The fidelity column crosses the classical bound between the grid
    // points bracketing 2 sqrt(2) - 2.
    let tf_at = |row: usize| -> f64 { lines[row + 1].split(',').nth(7).unwrap().parse().unwrap() };
    let d_at = |row: usize| -> f64 { lines[row + 1].split(',').nth(2).unwrap().parse().unwrap() };
    let mut crossing = None;
    for i in 0..200 {
        if tf_at(i) > 2.0 / 3.0 && tf_at(i + 1) <= 2.0 / 3.0 {
            crossing = Some((d_at(i), d_at(i + 1)));
        }
    }
    let (lo, hi) = crossing.expect("fidelity crosses 2/3");
    assert!(lo >= 0.825 - 1e-12 && hi <= 0.830 + 1e-12, "crossing in [{lo}, {hi}]");

    // Every row obeys the fidelity law and the usefulness biconditional.
    for i in 0..201 {
        let fef: f64 = lines[i + 1].split(',').nth(6).unwrap().parse().unwrap();
        assert!((tf_at(i) - (2.0 * fef + 1.0) / 3.0).abs() <= 1e-12);
        assert_eq!(tf_at(i) > 2.0 / 3.0 + 1e-12, fef > 0.5 + 1e-12);
    }
}

#[test]
fn wmrwm_sweep_success_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1w.csv");
    let out = run(&[
        "sweep", "--scenario", "1", "--wmrwm", "--p", "0.1", "--variant", "both",
        "--steps", "21", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(lines.len(), 42);
    let col = |line: &str, idx: usize| -> f64 { line.split(',').nth(idx).unwrap().parse().unwrap() };
    for pair in lines.chunks(2) {
        let (tf_row, c_row) = (pair[0], pair[1]);
        assert!(tf_row.contains("TF_MAX") && c_row.contains("C_MAX"));
        assert!(
            col(c_row, 15) >= col(tf_row, 15) - 1e-9,
            "ordering broken: {tf_row} vs {c_row}"
        );

        // Emitted optima match the closed forms: tf = (3+2dp')/(3+3dp') and
        // concurrence = 1/sqrt(1+dp') with p' = 1 - p. At the clamped
        // endpoint the analytic optimum sits below the success-probability
        // floor, so only interior points are compared.
        let d = col(tf_row, 2);
        if d <= 0.95 {
            let eta = d * 0.9;
            assert!(
                (col(tf_row, 7) - (3.0 + 2.0 * eta) / (3.0 + 3.0 * eta)).abs() <= 1e-6,
                "optimized fidelity column off at d={d}"
            );
            assert!(
                (col(c_row, 5) - 1.0 / (1.0 + eta).sqrt()).abs() <= 1e-6,
                "optimized concurrence column off at d={d}"
            );
        }
    }
}

#[test]
fn figure_one_writes_six_curves_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figure", "1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let expected = [
        "fig1.gp",
        "fig1_a_both.csv",
        "fig1_a_single.csv",
        "fig1_b_both.csv",
        "fig1_b_single.csv",
        "fig1_c_both.csv",
        "fig1_c_single.csv",
    ];
    assert_eq!(names, expected);
    let script = std::fs::read_to_string(dir.path().join("fig1.gp")).unwrap();
    assert!(script.contains("2.0/3.0"), "plot script must draw the classical bound");
}

#[test]
fn figure_id_out_of_range_is_usage_error() {
    let out = run(&["figure", "4", "--out", "/tmp/nowhere"]);
    assert_eq!(out.status.code(), Some(2));
}
