//! Integration tests for the `hsgs` binary and the on-disk conventions:
//! the simulate → fit → summarize → metrics → roc flow, exit codes, mask
//! semantics, and manifest-driven reproducibility.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hsgs"))
}

fn run_ok(args: &[&str]) {
    let out = bin().args(args).output().expect("spawn hsgs");
    assert!(
        out.status.success(),
        "hsgs {:?} failed with {:?}:\n{}",
        args,
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn exit_code(args: &[&str]) -> i32 {
    let out = bin().args(args).output().expect("spawn hsgs");
    out.status.code().expect("no exit code")
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn full_workflow_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let data = d.join("data");
    let est = d.join("est");
    std::fs::create_dir_all(&est).unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_string();

    run_ok(&[
        "simulate", "--p", "8", "--q", "4", "--n", "30", "--sparsity", "0.15", "--seed", "3",
        "--out-dir", &s(&data),
    ]);
    for f in ["X.csv", "Y.csv", "B_true.csv", "Omega_true.csv", "X_test.csv", "Y_test.csv", "manifest.json"] {
        assert!(data.join(f).exists(), "simulate did not write {f}");
    }
    assert_eq!(read_csv(&data.join("X.csv")).len(), 30);
    assert_eq!(read_csv(&data.join("B_true.csv"))[0].len(), 4);

    run_ok(&[
        "fit", "--x", &s(&data.join("X.csv")), "--y", &s(&data.join("Y.csv")),
        "--burnin", "40", "--nmc", "80", "--seed", "1",
        "--out-samples", &s(&d.join("samples.bin")),
        "--out-summary", &s(&d.join("summary.json")),
    ]);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n"], 30);
    assert_eq!(summary["p"], 8);
    assert_eq!(summary["q"], 4);
    assert!(summary["chains"][0]["loglik_mean"].is_f64());

    run_ok(&[
        "summarize", "--samples", &s(&d.join("samples.bin")),
        "--out-b", &s(&est.join("Bhat.csv")),
        "--out-omega", &s(&est.join("Omegahat.csv")),
        "--out-select", &s(&est),
    ]);
    // Selection masks are 0/1; the Omega mask is symmetric with an
    // all-zero diagonal (diagonals are never "selected").
    let mask = read_csv(&est.join("Omega_select.csv"));
    for (i, row) in mask.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            assert!(v == 0.0 || v == 1.0, "mask entry {v}");
            assert_eq!(v, mask[j][i], "mask asymmetry at ({i},{j})");
            if i == j {
                assert_eq!(v, 0.0, "diagonal marked selected at {i}");
            }
        }
    }
    let omega_hat = read_csv(&est.join("Omegahat.csv"));
    assert_eq!(omega_hat.len(), 4);
    assert!(omega_hat[0][0] > 0.0, "precision diagonal must be positive");

    run_ok(&[
        "metrics", "--truth-dir", &s(&data), "--estimate-dir", &s(&est),
        "--test-dir", &s(&data), "--out-json", &s(&d.join("metrics.json")),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("metrics.json")).unwrap()).unwrap();
    let obj = report.as_object().unwrap();
    let expected = [
        "mse_b", "mse_omega", "prediction_mse", "avg_kl",
        "b_sen", "b_spe", "b_prc", "omega_sen", "omega_spe", "omega_prc",
    ];
    assert_eq!(obj.len(), expected.len(), "unexpected metrics fields: {obj:?}");
    for key in expected {
        assert!(obj.contains_key(key), "metrics report lacks {key}");
    }
    assert!(report["mse_b"].as_f64().unwrap() >= 0.0);

    run_ok(&[
        "roc", "--mode", "bayes", "--samples", &s(&d.join("samples.bin")),
        "--truth-dir", &s(&data), "--out-csv", &s(&d.join("roc.csv")),
    ]);
    let roc = read_csv(&d.join("roc_B.csv"));
    assert_eq!(roc.len(), 99, "one row per credible level");
    for row in &roc {
        assert_eq!(row.len(), 3);
        assert!((0.0..=1.0).contains(&row[1]) && (0.0..=1.0).contains(&row[2]));
    }
    // Levels ascend, so selections only shrink: both rates non-increasing.
    for w in roc.windows(2) {
        assert!(w[1][1] <= w[0][1] + 1e-12, "fpr must not rise with the level");
        assert!(w[1][2] <= w[0][2] + 1e-12, "tpr must not rise with the level");
    }

    run_ok(&[
        "roc", "--mode", "threshold", "--estimate-dir", &s(&est),
        "--truth-dir", &s(&data), "--out-csv", &s(&d.join("roc_thr.csv")),
    ]);
    let thr = read_csv(&d.join("roc_thr_B.csv"));
    assert_eq!(thr[0][0], 0.0, "threshold grid starts at zero");
    assert_eq!((thr[0][1], thr[0][2]), (1.0, 1.0), "cut 0 selects everything");
}

#[test]
fn simulate_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        run_ok(&[
            "simulate", "--p", "6", "--q", "3", "--n", "25", "--structure", "cliques",
            "--coef", "const5", "--seed", "99", "--out-dir", out.to_str().unwrap(),
        ]);
    }
    for f in ["X.csv", "Y.csv", "B_true.csv", "Omega_true.csv", "X_test.csv", "Y_test.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f} differs between identical runs"
        );
    }
    // const5 puts the value 5 at every nonzero coefficient.
    let b_true = read_csv(&a.join("B_true.csv"));
    assert!(b_true.iter().flatten().all(|&v| v == 0.0 || v == 5.0));
}

#[test]
fn thinning_controls_the_stored_draw_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |p: std::path::PathBuf| p.to_str().unwrap().to_string();
    run_ok(&[
        "simulate", "--p", "4", "--q", "2", "--n", "15", "--seed", "2",
        "--out-dir", &s(d.join("data")),
    ]);
    run_ok(&[
        "fit", "--x", &s(d.join("data/X.csv")), "--y", &s(d.join("data/Y.csv")),
        "--burnin", "10", "--nmc", "30", "--thin", "3", "--seed", "4",
        "--out-samples", &s(d.join("thinned.bin")),
        "--out-summary", &s(d.join("sum.json")),
    ]);
    let header = hsgs::io::read_samples_header(&d.join("thinned.bin")).unwrap();
    assert_eq!(header, (15, 4, 2, 30), "thinning must not change the stored draw count");
    let samples = hsgs::io::read_samples(&d.join("thinned.bin")).unwrap();
    assert_eq!(samples.beta_draws.nrows(), 30);
}

#[test]
fn exit_codes_distinguish_usage_from_runtime_failures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |p: std::path::PathBuf| p.to_str().unwrap().to_string();

    // Unknown flags and unparseable values: usage errors from the parser.
    assert_eq!(exit_code(&["simulate", "--bogus"]), 2);
    assert_eq!(exit_code(&["fit"]), 2);

    // Well-formed flags with invalid values: still usage (exit 2).
    assert_eq!(
        exit_code(&[
            "simulate", "--p", "3", "--q", "25", "--n", "10", "--structure", "star",
            "--out-dir", &s(d.join("star")),
        ]),
        2,
        "an indefinite star precision is an invalid-input error"
    );
    run_ok(&[
        "simulate", "--p", "4", "--q", "2", "--n", "12", "--seed", "1",
        "--out-dir", &s(d.join("data")),
    ]);
    assert_eq!(
        exit_code(&[
            "fit", "--x", &s(d.join("data/X.csv")), "--y", &s(d.join("data/Y.csv")),
            "--nmc", "0",
            "--out-samples", &s(d.join("s.bin")), "--out-summary", &s(d.join("s.json")),
        ]),
        2,
        "nmc = 0 is an invalid-input error"
    );

    // Missing files: runtime failure (exit 1).
    assert_eq!(
        exit_code(&[
            "fit", "--x", &s(d.join("missing.csv")), "--y", &s(d.join("data/Y.csv")),
            "--out-samples", &s(d.join("s.bin")), "--out-summary", &s(d.join("s.json")),
        ]),
        1
    );
    assert_eq!(
        exit_code(&[
            "summarize", "--samples", &s(d.join("missing.bin")),
            "--out-b", &s(d.join("b.csv")), "--out-omega", &s(d.join("o.csv")),
            "--out-select", &s(d.join("sel")),
        ]),
        1
    );
}

#[test]
fn fit_manifest_records_a_replayable_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |p: std::path::PathBuf| p.to_str().unwrap().to_string();
    run_ok(&[
        "simulate", "--p", "5", "--q", "2", "--n", "20", "--seed", "6",
        "--out-dir", &s(d.join("data")),
    ]);
    run_ok(&[
        "fit", "--x", &s(d.join("data/X.csv")), "--y", &s(d.join("data/Y.csv")),
        "--burnin", "20", "--nmc", "50", "--seed", "8",
        "--out-samples", &s(d.join("run1.bin")), "--out-summary", &s(d.join("run1.json")),
    ]);
    let manifest = hsgs::io::read_manifest(&d.join("fit.manifest.json")).unwrap();
    assert_eq!(manifest.command, "fit");
    assert_eq!(manifest.seed, 8);
    assert!(manifest.wall_seconds > 0.0);
    assert!(manifest.outputs.iter().any(|p| p.ends_with("run1.bin")));

    // Feed the recorded parameters back through the CLI.
    let params = &manifest.params;
    run_ok(&[
        "fit",
        "--x", params["x_path"].as_str().unwrap(),
        "--y", params["y_path"].as_str().unwrap(),
        "--burnin", &params["burnin"].to_string(),
        "--nmc", &params["nmc"].to_string(),
        "--thin", &params["thin"].to_string(),
        "--seed", &params["seed"].to_string(),
        "--out-samples", &s(d.join("run2.bin")),
        "--out-summary", &s(d.join("run2.json")),
    ]);
    assert_eq!(
        std::fs::read(d.join("run1.bin")).unwrap(),
        std::fs::read(d.join("run2.bin")).unwrap(),
        "replayed fit produced a different sample stream"
    );
}

#[test]
fn metrics_reports_null_rates_when_truth_has_no_signal() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |p: std::path::PathBuf| p.to_str().unwrap().to_string();
    run_ok(&[
        "simulate", "--p", "4", "--q", "2", "--n", "25", "--sparsity", "0", "--seed", "5",
        "--out-dir", &s(d.join("data")),
    ]);
    run_ok(&[
        "fit", "--x", &s(d.join("data/X.csv")), "--y", &s(d.join("data/Y.csv")),
        "--burnin", "30", "--nmc", "60", "--seed", "2",
        "--out-samples", &s(d.join("s.bin")), "--out-summary", &s(d.join("sum.json")),
    ]);
    std::fs::create_dir_all(d.join("est")).unwrap();
    run_ok(&[
        "summarize", "--samples", &s(d.join("s.bin")),
        "--out-b", &s(d.join("est/Bhat.csv")), "--out-omega", &s(d.join("est/Omegahat.csv")),
        "--out-select", &s(d.join("est")),
    ]);
    run_ok(&[
        "metrics", "--truth-dir", &s(d.join("data")), "--estimate-dir", &s(d.join("est")),
        "--test-dir", &s(d.join("data")), "--out-json", &s(d.join("metrics.json")),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("metrics.json")).unwrap()).unwrap();
    // No true coefficients exist, so sensitivity has an empty denominator
    // and is reported as null rather than a number.
    assert!(report["b_sen"].is_null(), "b_sen should be null, was {}", report["b_sen"]);
    assert!(report["b_spe"].is_f64());
}
