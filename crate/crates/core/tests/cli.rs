//! End-to-end checks of the command-line surface: every subcommand, the
//! plan file format, and nonzero exits on bad input.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture_path;

fn neo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn optimize_prints_best_row_and_delta() {
    let csv = fixture_path("auto93.csv");
    let out = neo(&[
        "optimize",
        csv.to_str().unwrap(),
        "--sampler",
        "LITE",
        "--budget",
        "50",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("dataset: auto93 (205 rows)"));
    assert!(text.contains("best row: Clndrs,Volume,HpX,Model,origin,Lbs-,Acc+,Mpg+"));
    assert!(text.contains("d2h: 0."));
    assert!(text.contains("delta: "));
    assert!(text.contains("labels spent: 50"));

    // identical invocation, identical output
    let again = neo(&[
        "optimize",
        csv.to_str().unwrap(),
        "--sampler",
        "LITE",
        "--budget",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn bench_rank_round_trip(){
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.txt");
    let plan = format!(
        "# tiny demo plan\ndatasets = {}, {}\nsamplers = RANDOM, LITE\nbudgets = 6, 12\nrepeats = 5\nseed = 7\nworkers = 2\n",
        fixture_path("auto93.csv").display(),
        fixture_path("wine_small.csv").display(),
    );
    std::fs::write(&plan_path, plan).unwrap();

    let json_path = dir.path().join("results.json");
    let out = neo(&[
        "bench",
        "--plan",
        plan_path.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json_path.exists());

    // markdown to stdout contains box-style cells and the summary
    let md = neo(&["bench", "--plan", plan_path.to_str().unwrap()]);
    assert!(md.status.success());
    let text = stdout(&md);
    assert!(text.contains("# bench report"));
    assert!(text.contains("| auto93 | 205 |"));
    assert!(text.contains("## summary"));
    assert!(text.contains("## runtimes"));

    // rank re-reads the json report
    let rank = neo(&["rank", json_path.to_str().unwrap()]);
    assert!(rank.status.success(), "{}", String::from_utf8_lossy(&rank.stderr));
    let text = stdout(&rank);
    assert!(text.contains("auto93 (205 rows)"));
    assert!(text.contains("LITE-12"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("a ")));
}

#[test]
fn bingo_formats_and_verdict() {
    let csv = fixture_path("storm_tuning.csv");
    let out = neo(&[
        "bingo",
        csv.to_str().unwrap(),
        "--iterations",
        "40",
        "--seed",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("buckets-before"));
    assert!(text.contains("storm_tuning: median filled"));

    let json = neo(&[
        "bingo",
        csv.to_str().unwrap(),
        "--iterations",
        "10",
        "--seed",
        "2",
        "--format",
        "json",
    ]);
    assert!(json.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(parsed["bands"].is_array());
    assert_eq!(parsed["datasets"][0]["dataset"], "storm_tuning");
}

#[test]
fn samplesize_regimes_and_grid() {
    let out = neo(&["samplesize", "--regime", "neo", "--C", "0.95", "--eps", "0.05"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("at least 59 samples"));

    let out = neo(&[
        "samplesize", "--regime", "bestarm", "--C", "0.95", "--eps", "0.5", "--A", "1",
    ]);
    assert!(stdout(&out).contains("at least 30 samples"));

    let out = neo(&[
        "samplesize", "--regime", "rewardfree", "--C", "0.95", "--eps", "0.05", "--S", "1",
        "--A", "1", "--H", "1",
    ]);
    assert!(stdout(&out).contains("at least 1199 samples"));

    let out = neo(&["samplesize", "--regime", "neo", "--grid"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("eps=0.05"));
    assert!(text.lines().count() > 4);
}

#[test]
fn bad_inputs_exit_nonzero() {
    // unknown sampler
    let csv = fixture_path("auto93.csv");
    let out = neo(&["optimize", csv.to_str().unwrap(), "--sampler", "TURBO"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown sampler"));

    // missing dataset file
    let out = neo(&["optimize", "/nonexistent/x.csv"]);
    assert!(!out.status.success());

    // malformed plan
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("bad.txt");
    std::fs::write(&plan, "datasets = a.csv\nbogus_key = 1\n").unwrap();
    let out = neo(&["bench", "--plan", plan.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    // unknown report format
    let good_plan = dir.path().join("good.txt");
    std::fs::write(
        &good_plan,
        format!("datasets = {}\n", fixture_path("auto93.csv").display()),
    )
    .unwrap();
    let out = neo(&["bench", "--plan", good_plan.to_str().unwrap(), "--format", "yaml"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown report format"));

    // ragged csv
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "X,Y+\n1,2\n3\n").unwrap();
    let out = neo(&["optimize", ragged.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 2 cells"));

    // samplesize domain violation
    let out = neo(&["samplesize", "--regime", "neo", "--C", "1.5"]);
    assert!(!out.status.success());
}

#[test]
fn plan_relative_paths_resolve_from_cwd() {
    // the plan file carries paths as written; run from the crate root
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.txt");
    std::fs::write(
        &plan,
        "datasets = fixtures/auto93.csv\nsamplers = RANDOM\nbudgets = 6\nrepeats = 2\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_neo"))
        .args(["bench", "--plan", plan.to_str().unwrap(), "--format", "csv"])
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("auto93,205,RANDOM-6,RANDOM,6,"));
}
