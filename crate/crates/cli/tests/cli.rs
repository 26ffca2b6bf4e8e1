//! End-to-end tests of the command-line interface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn speedscale(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_speedscale"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("speedscale-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gap_prints_closed_form_energies() {
    let dir = temp_dir("gap");
    let output = speedscale(&["gap", "--n", "5", "--alpha", "2"], &dir);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("E_pr: 9"), "{text}");
    assert!(text.contains("E_npr: 18.33333333333333"), "{text}");
    assert!(text.contains("ratio: 2.037"), "{text}");
}

#[test]
fn gap_oracle_verification_succeeds() {
    let dir = temp_dir("gap-verify");
    let output = speedscale(
        &["gap", "--n", "4", "--alpha", "2", "--verify-oracle"],
        &dir,
    );
    assert!(output.status.success());
    assert!(stdout(&output).contains("oracle_matches_closed_form: true"));
}

#[test]
fn generate_classify_solve_check_pipeline() {
    let dir = temp_dir("pipeline");
    for (family, expect_flag, alg) in [
        ("common-release", "common_release: true", "crd"),
        ("common-deadline", "common_deadline: true", "cd"),
        ("clique", "clique: true", "clique"),
        ("agreeable", "agreeable: true", "agr"),
        ("pure-laminar", "pure_laminar: true", "clique"),
    ] {
        let inst = format!("{family}.json");
        let sched = format!("{family}-sched.json");
        let generated = speedscale(
            &[
                "gen", "--family", family, "--n", "7", "--m", "2", "--alpha", "2", "--seed", "11",
                "-o", &inst,
            ],
            &dir,
        );
        assert!(generated.status.success(), "{family}: {generated:?}");

        let classified = speedscale(&["classify", &inst], &dir);
        assert!(classified.status.success());
        assert!(
            stdout(&classified).contains(expect_flag),
            "{family}: {}",
            stdout(&classified)
        );

        let solved = speedscale(&["solve", "--alg", alg, "-o", &sched, &inst], &dir);
        assert!(solved.status.success(), "{family}: {solved:?}");
        let text = stdout(&solved);
        assert!(text.contains("within_bound: true"), "{family}: {text}");

        let checked = speedscale(&["check", &inst, &sched], &dir);
        assert!(checked.status.success(), "{family}: {checked:?}");
        assert!(stdout(&checked).contains("feasible"));
    }
}

#[test]
fn solve_auto_picks_the_tightest_scheduler() {
    let dir = temp_dir("auto");
    let generated = speedscale(
        &[
            "gen",
            "--family",
            "common-release",
            "--n",
            "5",
            "--m",
            "2",
            "--alpha",
            "3",
            "--seed",
            "3",
            "-o",
            "cr.json",
        ],
        &dir,
    );
    assert!(generated.status.success());
    let solved = speedscale(&["solve", "--alg", "auto", "cr.json"], &dir);
    assert!(solved.status.success());
    // (2 - 1/2)^(3-1) = 2.25.
    assert!(
        stdout(&solved).contains("bound: 2.25"),
        "{}",
        stdout(&solved)
    );
}

#[test]
fn wrong_family_is_a_usage_error() {
    let dir = temp_dir("wrong-family");
    let generated = speedscale(
        &[
            "gen",
            "--family",
            "common-deadline",
            "--n",
            "4",
            "--m",
            "1",
            "--alpha",
            "2",
            "--seed",
            "5",
            "-o",
            "cdl.json",
        ],
        &dir,
    );
    assert!(generated.status.success());
    let solved = speedscale(&["solve", "--alg", "crd", "cdl.json"], &dir);
    assert_eq!(solved.status.code(), Some(2), "{solved:?}");
    assert!(String::from_utf8_lossy(&solved.stderr).contains("wrong instance family"));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = temp_dir("parse-error");
    std::fs::write(dir.join("bad.json"), "{ not json").unwrap();
    let solved = speedscale(&["solve", "bad.json"], &dir);
    assert_eq!(solved.status.code(), Some(2));
    let missing = speedscale(&["classify", "no-such-file.json"], &dir);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn preemptive_solve_writes_a_checkable_schedule() {
    let dir = temp_dir("preemptive");
    let generated = speedscale(
        &[
            "gen", "--family", "clique", "--n", "6", "--m", "2", "--alpha", "2", "--seed", "8",
            "-o", "cl.json",
        ],
        &dir,
    );
    assert!(generated.status.success());
    let solved = speedscale(
        &["solve", "--alg", "preemptive", "-o", "pre.json", "cl.json"],
        &dir,
    );
    assert!(solved.status.success());
    let checked = speedscale(&["check", "--mode", "pre", "cl.json", "pre.json"], &dir);
    assert!(checked.status.success(), "{checked:?}");
}

#[test]
fn bench_reports_every_row_within_bound() {
    let dir = temp_dir("bench");
    let output = speedscale(
        &[
            "bench",
            "--families",
            "common-release,common-deadline,clique,pure-laminar,agreeable",
            "--trials",
            "2",
            "--alphas",
            "1.5,2",
            "--machines",
            "1,2",
            "--seed",
            "17",
            "--out",
            "report.csv",
        ],
        &dir,
    );
    assert!(output.status.success(), "{output:?}");
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,family,n,m,alpha,algorithm,energy,preemptive_lb,ratio,bound,within_bound"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5 * 2 * 2 * 2);
    assert!(rows.iter().all(|r| r.ends_with(",true")));

    // Byte-identical on identical inputs.
    let again = speedscale(
        &[
            "bench",
            "--families",
            "common-release,common-deadline,clique,pure-laminar,agreeable",
            "--trials",
            "2",
            "--alphas",
            "1.5,2",
            "--machines",
            "1,2",
            "--seed",
            "17",
            "--out",
            "report2.csv",
        ],
        &dir,
    );
    assert!(again.status.success());
    let csv2 = std::fs::read_to_string(dir.join("report2.csv")).unwrap();
    assert_eq!(csv, csv2);
}

#[test]
fn tolerance_env_override_is_accepted() {
    let dir = temp_dir("tolerance");
    let generated = speedscale(
        &[
            "gen", "--family", "clique", "--n", "4", "--m", "1", "--alpha", "2", "--seed", "2",
            "-o", "cl.json",
        ],
        &dir,
    );
    assert!(generated.status.success());
    let output = Command::new(env!("CARGO_BIN_EXE_speedscale"))
        .args(["solve", "--alg", "clique", "cl.json"])
        .env("SPEEDSCALE_TOLERANCE", "1e-6")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let bad = Command::new(env!("CARGO_BIN_EXE_speedscale"))
        .args(["solve", "--alg", "clique", "cl.json"])
        .env("SPEEDSCALE_TOLERANCE", "zero")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
