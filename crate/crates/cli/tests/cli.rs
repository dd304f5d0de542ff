//! End-to-end runs of the `lmg` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lmg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args(args)
        .env_remove("LMG_THREADS")
        .output()
        .expect("spawn lmg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Data rows of a CSV, header dropped, split into cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn spectrum_j2_at_zero_gamma() {
    let o = lmg(&["spectrum", "--j", "2", "--gamma", "0"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("j,gamma,level_index,eigenvalue,pair_id,is_zero_mode\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 5);
    for (row, want) in r.iter().zip([0.0, 1.0, 1.0, 4.0, 4.0]) {
        assert!((f(&row[3]) - want).abs() < 1e-12, "{row:?}");
    }
    assert_eq!(r[0][5], "true");
    assert_eq!(r[0][4], "");
    assert_eq!((r[1][4].as_str(), r[2][4].as_str()), ("0", "0"));
    assert_eq!((r[3][4].as_str(), r[4][4].as_str()), ("1", "1"));
}

#[test]
fn spectrum_fig1_grid_has_505_rows_and_gamma_symmetry() {
    let o = lmg(&[
        "spectrum",
        "--j",
        "2",
        "--gamma-min",
        "-1",
        "--gamma-max",
        "1",
        "--steps",
        "101",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 505);
    // Row blocks of five per γ; γ_k and γ_{100−k} carry the same levels.
    for k in 0..101 {
        let (a, b) = (&r[5 * k..5 * k + 5], &r[5 * (100 - k)..5 * (100 - k) + 5]);
        assert_eq!(f(&a[0][1]), -f(&b[0][1]));
        for (x, y) in a.iter().zip(b) {
            let (ex, ey) = (f(&x[3]), f(&y[3]));
            assert!((ex - ey).abs() <= 1e-9 * ex.abs().max(1.0));
        }
        assert_eq!(a.iter().filter(|row| row[5] == "true").count(), 1);
        assert_eq!(a.iter().filter(|row| !row[4].is_empty()).count(), 4);
    }
}

#[test]
fn spectrum_general_model_matches_dense_oracle() {
    let o = lmg(&[
        "spectrum", "--j", "2", "--gamma", "0.5", "--model", "general", "--xi", "1", "--chi1", "2",
        "--chi2", "1", "--lambda", "0.7",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 5);
    let p = lmg_core::ModelParams::new(1.0, 2.0, 1.0, 0.7).unwrap();
    let want = lmg_core::eig_dense_symmetric(&lmg_core::build_lmg_general(
        lmg_core::SpinJ::integer(2),
        &p,
    ))
    .unwrap();
    for (row, w) in r.iter().zip(&want) {
        assert_eq!(f(&row[3]), *w);
        assert_eq!((row[4].as_str(), row[5].as_str()), ("", ""));
        assert!((f(&row[1]) - 0.5_f64.atanh()).abs() < 1e-15);
    }
}

#[test]
fn spectrum_half_integer_has_no_zero_mode() {
    let o = lmg(&[
        "spectrum", "--j", "3/2", "--gamma", "0.5", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["is_zero_mode"] == false));
    assert_eq!(v["summary"]["susy_broken"], 1);
}

#[test]
fn gap_scan_trivial_row() {
    let o = lmg(&["gap-scan", "--j-list", "2", "--gamma", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "j,gamma,gap,bound,satisfied\n2,0.0,1.0,1.0,true\n"
    );
}

#[test]
fn gap_scan_fig2_all_satisfied() {
    let o = lmg(&[
        "gap-scan",
        "--j-list",
        "5,10,15,25,30",
        "--gamma-min",
        "0",
        "--gamma-max",
        "3",
        "--steps",
        "150",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 750);
    assert!(r.iter().all(|row| row[4] == "true"));
    assert_eq!(r[0][0], "5");
    assert_eq!(f(&r[149][1]), 3.0);
    assert_eq!(r[150][0], "10");
}

#[test]
fn gap_scan_default_range() {
    let o = lmg(&["gap-scan", "--j-list", "3"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 150);
    assert_eq!((f(&r[0][1]), f(&r[149][1])), (0.0, 3.0));
}

#[test]
fn gap_scan_large_j_reports_runtime() {
    let o = lmg(&["gap-scan", "--j-list", "100000", "--gamma", "0.5"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][4], "true");
    assert!(String::from_utf8_lossy(&o.stderr).contains(" s"));
}

#[test]
fn gap_scan_half_integer_rows() {
    let all_bad = lmg(&["gap-scan", "--j-list", "1.5", "--gamma", "0.2"]);
    assert_eq!(code(&all_bad), 2);
    assert_eq!(rows(&stdout(&all_bad))[0][4], "error");
    let mixed = lmg(&["gap-scan", "--j-list", "1.5,2", "--gamma", "0.2"]);
    assert_eq!(code(&mixed), 0);
    let r = rows(&stdout(&mixed));
    assert_eq!((r[0][4].as_str(), r[1][4].as_str()), ("error", "true"));
}

#[test]
fn susy_check_examples() {
    let o = lmg(&[
        "susy-check",
        "--j",
        "2",
        "--gamma",
        "0.7",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["verdict"], "SusyPattern");
    let h = row["h_norm"].as_f64().unwrap();
    for key in ["q1_square", "q2_square", "anticommutator", "commutator"] {
        assert!(row[key].as_f64().unwrap() <= 1e-10 * h.max(1.0), "{key}");
    }
    assert_eq!(row["mirror_exact"], true);

    let o = lmg(&["susy-check", "--j", "3", "--gamma", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["q1_square", "q2_square", "anticommutator"] {
        assert_eq!(v["rows"][0][key], 0.0, "{key}");
    }

    let o = lmg(&[
        "susy-check",
        "--j",
        "1.5",
        "--gamma",
        "0.5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["verdict"], "SusyBroken");
    assert_eq!(v["rows"][0]["broken"], true);
    assert!(v["rows"][0]["smallest_eigenvalue"].as_f64().unwrap() > 1e-3);
}

#[test]
fn susy_check_pattern_fails_with_a_tiny_tolerance() {
    // Doublets split by rounding cannot pass a tolerance below machine precision.
    let o = lmg(&[
        "susy-check",
        "--j",
        "6",
        "--gamma",
        "1.3",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("spectrum"));
}

#[test]
fn ground_state_examples() {
    let o = lmg(&["ground-state", "--j", "2", "--gamma", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "m,amplitude\n-2,0.0\n-1,0.0\n0,1.0\n1,0.0\n2,0.0\n"
    );

    let o = lmg(&["ground-state", "--j", "10", "--gamma", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&stdout(&o)).len(), 21);

    let o = lmg(&[
        "ground-state",
        "--j",
        "10",
        "--gamma",
        "1",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["summary"]["norms"]["ratio"].as_f64().unwrap() - 1.0).abs() <= 1e-10);

    let o = lmg(&[
        "ground-state",
        "--j",
        "4",
        "--gamma",
        "0.5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = &v["summary"];
    assert_eq!(s["amplitudes"].as_array().unwrap().len(), 9);
    assert!(s["norms"]["direct"].is_number() && s["norms"]["legendre"].is_number());
    assert!(
        s["residual"]["energy"].as_f64().unwrap()
            <= 1e-9 * s["residual"]["h_norm"].as_f64().unwrap()
    );
    let norm: f64 = s["amplitudes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_f64().unwrap().powi(2))
        .sum();
    assert!((norm - 1.0).abs() < 1e-14);
}

#[test]
fn ground_state_rotated_frame() {
    let o = lmg(&[
        "ground-state",
        "--j",
        "3",
        "--gamma",
        "0.4",
        "--frame",
        "rotated",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    // The rotated zero mode lives on J + m even.
    for row in &r {
        let m: i64 = row[0].parse().unwrap();
        if (3 + m) % 2 == 1 {
            assert_eq!(f(&row[1]), 0.0);
        }
    }
}

#[test]
fn bench_rows() {
    let o = lmg(&["bench", "--j-list", "10", "--gamma", "0"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert!((f(&r[0][2]) - 1.0).abs() < 1e-13);
    assert_eq!(r[0][5], "152");

    let one = lmg(&[
        "bench",
        "--j-list",
        "1000",
        "--gamma",
        "2",
        "--threads",
        "1",
    ]);
    let four = lmg(&[
        "bench",
        "--j-list",
        "1000",
        "--gamma",
        "2",
        "--threads",
        "4",
    ]);
    assert_eq!(code(&four), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn json_shape() {
    let o = lmg(&[
        "gap-scan", "--j-list", "2,3", "--gamma", "0,0.5", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["config", "rows", "summary"]);
    assert_eq!(v["config"]["command"], "gap-scan");
    assert_eq!(v["config"]["gamma"], serde_json::json!([0.0, 0.5]));
    assert!(v["config"].get("threads").is_none());
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["summary"]["satisfied"], 4);
}

#[test]
fn thread_count_never_changes_bytes() {
    let args = [
        "spectrum",
        "--j-list",
        "2,3,7/2",
        "--gamma-min",
        "-2",
        "--gamma-max",
        "2",
        "--steps",
        "41",
    ];
    let reference = lmg(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(code(&reference), 0);
    for t in ["2", "3", "8"] {
        let o = lmg(&[&args[..], &["--threads", t]].concat());
        assert_eq!(o.stdout, reference.stdout, "--threads {t}");
    }
    let env = Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args(args)
        .env("LMG_THREADS", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, reference.stdout);
}

#[test]
fn threads_flag_wins_over_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args([
            "gap-scan",
            "--j-list",
            "2",
            "--gamma",
            "0",
            "--threads",
            "2",
        ])
        .env("LMG_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args(["gap-scan", "--j-list", "2", "--gamma", "0"])
        .env("LMG_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["frobnicate"],
        &["spectrum", "--j", "2"],
        &["spectrum", "--j", "2", "--j-list", "3", "--gamma", "0"],
        &["spectrum", "--gamma", "0"],
        &["spectrum", "--j", "2", "--gamma", "0", "--steps", "5"],
        &[
            "spectrum",
            "--j",
            "2",
            "--gamma-min",
            "1",
            "--gamma-max",
            "0",
        ],
        &[
            "spectrum",
            "--j",
            "2",
            "--gamma-min",
            "0",
            "--gamma-max",
            "1",
            "--steps",
            "0",
        ],
        &["spectrum", "--j", "2.25", "--gamma", "0"],
        &[
            "spectrum", "--j", "2", "--gamma", "0", "--model", "general", "--xi", "1",
        ],
        &["spectrum", "--j", "2", "--gamma", "0", "--chi1", "1"],
        &["spectrum", "--j", "2", "--gamma", "0", "--tol", "-1"],
        &["spectrum", "--j", "2", "--gamma", "0", "--threads", "0"],
        &["spectrum", "--j", "300.5", "--gamma", "0"],
        &["gap-scan", "--j-list", "2", "--model", "general"],
        &["ground-state", "--j", "2", "--gamma", "0,1"],
        &["ground-state", "--j", "2.5", "--gamma", "0"],
        &["bench", "--j-list", "0", "--gamma", "0"],
        &[
            "spectrum",
            "--j",
            "2",
            "--gamma",
            "0",
            "--emit-plot",
            "x.gp",
        ],
        &[
            "susy-check",
            "--j",
            "2",
            "--gamma",
            "0",
            "--frame",
            "rotated",
        ],
    ];
    for args in cases {
        let o = lmg(args);
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(code(&lmg(&["--help"])), 0);
}

#[test]
fn out_file_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gap.csv");
    let gp = dir.path().join("gap.gp");
    let o = lmg(&[
        "gap-scan",
        "--j-list",
        "5,30",
        "--steps",
        "7",
        "--out",
        csv.to_str().unwrap(),
        "--emit-plot",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let data = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows(&data).len(), 14);
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(script.contains("cosh(2*x)"));

    let spec = dir.path().join("spec.csv");
    let spec_gp = dir.path().join("spec.gp");
    let o = lmg(&[
        "spectrum",
        "--j-list",
        "2,3",
        "--gamma-min",
        "-1",
        "--gamma-max",
        "1",
        "--steps",
        "5",
        "--out",
        spec.to_str().unwrap(),
        "--emit-plot",
        spec_gp.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(Path::new(&spec_gp).exists());
    assert_eq!(
        rows(&std::fs::read_to_string(&spec).unwrap()).len(),
        5 * 5 + 5 * 7
    );
}
