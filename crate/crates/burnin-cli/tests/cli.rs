//! End-to-end runs of the `burnin` binary: argument handling, exit codes,
//! output shape, and reproducibility of what lands on stdout and disk.

use std::process::{Command, Output};

fn burnin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn delta_reports_both_variants_under_a_provenance_header() {
    let out = burnin(&["delta", "--p0", "0.3", "--p1", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# burnin "), "missing header: {text}");
    assert!(text.contains("rss 0.294884"), "{text}");
    assert!(text.contains("ssd 0.208712"), "{text}");
}

#[test]
fn delta_can_restrict_to_one_variant() {
    let out = burnin(&[
        "delta",
        "--p0",
        "0.3",
        "--p1",
        "0.5",
        "--delta-variant",
        "ssd",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ssd 0.208712"), "{text}");
    assert!(!text.contains("rss 0."), "{text}");
}

#[test]
fn degenerate_rates_exit_with_the_validation_code() {
    let out = burnin(&["delta", "--p0", "1", "--p1", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("0/0"));
}

#[test]
fn missing_required_flags_are_usage_errors() {
    let out = burnin(&["recommend", "--p0", "0.3", "--n", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_table_ids_are_rejected() {
    let out = burnin(&["table", "--id", "t9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown table"));
}

#[test]
fn forced_balance_at_equal_rates_recommends_the_floor() {
    let out = burnin(&[
        "recommend",
        "--p0",
        "0.3",
        "--p1",
        "0.3",
        "--n",
        "100",
        "--design",
        "er",
        "--nsim",
        "200",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mode perrep"), "{text}");
    assert!(text.contains("b        2 +/- 0.00"), "{text}");
}

#[test]
fn supplied_diagnostics_skip_simulation() {
    let out = burnin(&[
        "recommend",
        "--p0",
        "0.12",
        "--p1",
        "0.37",
        "--n",
        "86",
        "--r",
        "0.1",
        "--eps",
        "0.05",
        "--delta-variant",
        "rss",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mode plugin"), "{text}");
    assert!(text.contains("b        18 +/- 0.00"), "{text}");
}

#[test]
fn recommend_writes_its_report_as_one_csv_row() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("report.csv");
    let out = burnin(&[
        "recommend",
        "--p0",
        "0.12",
        "--p1",
        "0.37",
        "--n",
        "86",
        "--r",
        "0.1",
        "--eps",
        "0.05",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).expect("report written");
    assert!(text.starts_with("design,mode,n_sim,rho,"), "{text}");
    assert!(text.contains(",plugin,"), "{text}");
    assert_eq!(text.lines().count(), 2, "{text}");
}

#[test]
fn budget_curve_output_is_deterministic() {
    let first = burnin(&["table", "--id", "fig2"]);
    let second = burnin(&["table", "--id", "fig2"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.contains("1000,500.000000"), "{text}");
    assert!(
        text.contains("reference: no published values for fig2"),
        "{text}"
    );
}

#[test]
fn table_artifacts_land_in_the_output_directory() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = burnin(&[
        "table",
        "--id",
        "fig2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("fig2.csv")).expect("csv written");
    assert!(csv.starts_with("n,budget"), "{csv}");
    let json = std::fs::read_to_string(dir.path().join("fig2.json")).expect("json written");
    assert!(json.contains("\"n_half\": 1000.0"), "{json}");
}

#[test]
fn a_csv_out_path_gets_a_json_sibling() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("curve.csv");
    let out = burnin(&["table", "--id", "fig2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(path.exists());
    assert!(dir.path().join("curve.json").exists());
}

#[test]
fn the_combined_reactiveness_table_covers_both_trials() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = burnin(&[
        "table",
        "--id",
        "t2",
        "--nsim",
        "20",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("note: reduced precision (20 replications)"),
        "{text}"
    );
    assert!(text.contains("reference t2-arrest: pinned"), "{text}");
    assert!(text.contains("reference t2-calisto: pinned"), "{text}");
    for name in [
        "t2-arrest.csv",
        "t2-arrest.json",
        "t2-calisto.csv",
        "t2-calisto.json",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
}

#[test]
fn simulate_prints_one_row_per_design_and_policy() {
    let out = burnin(&[
        "simulate",
        "--p0",
        "0.3",
        "--p1",
        "0.5",
        "--n",
        "40",
        "--design",
        "ptw",
        "--burnin",
        "min",
        "--nsim-oc",
        "50",
        "--nsim",
        "50",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("null_p=0.3"), "{text}");
    assert!(text.contains("ptw"), "{text}");
    assert!(text.contains("min"), "{text}");
}

#[test]
fn simulate_writes_raw_rates_to_csv() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("oc.csv");
    let out = burnin(&[
        "simulate",
        "--p0",
        "0.3",
        "--p1",
        "0.5",
        "--n",
        "40",
        "--design",
        "rpw",
        "--burnin",
        "4",
        "--nsim-oc",
        "50",
        "--nsim",
        "50",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).expect("csv written");
    assert!(text.starts_with("design,burnin,type1_z1"), "{text}");
    assert!(text.contains("rpw"), "{text}");
}

#[test]
fn profile_files_drive_a_simulation_batch() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("quick.profile");
    std::fs::write(
        &path,
        "p0 = 0.3\np1 = 0.5\nn = 40\ndesigns = er, rpw\nburnin = min, 8\n\
         n_sim_oc = 30\nn_sim_metrics = 30\nseed = 7\n",
    )
    .expect("profile written");
    let out = burnin(&["simulate", "--profile", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("seed 7"), "{text}");
    assert!(text.contains("replications=30"), "{text}");
    assert!(text.contains("er"), "{text}");
    assert!(text.contains("rpw"), "{text}");

    let reseeded = burnin(&[
        "simulate",
        "--profile",
        path.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert!(stdout(&reseeded).contains("seed 9"));
}

#[test]
fn thread_count_does_not_change_simulation_output() {
    let run = |threads: &str| {
        burnin(&[
            "--threads",
            threads,
            "simulate",
            "--p0",
            "0.3",
            "--p1",
            "0.5",
            "--n",
            "40",
            "--design",
            "ptw",
            "--burnin",
            "min",
            "--nsim-oc",
            "60",
            "--nsim",
            "40",
        ])
    };
    let one = run("1");
    let three = run("3");
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn global_metrics_integrate_over_the_rate_square() {
    let out = burnin(&[
        "metrics", "--global", "--n", "20", "--nsim", "50", "--design", "brar-t",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("integrated over the unit square"), "{text}");
    assert!(text.contains("rho      varies"), "{text}");
    assert!(text.contains("slopes   toward rho"), "{text}");
}
