//! End-to-end tests of the `mutau` binary: worked examples, exit-code
//! contract, determinism of primary output, and file output.

use std::path::Path;
use std::process::{Command, Output};

fn mutau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutau"))
        .args(args)
        .env_remove("MUTAU_GROEBNER_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = mutau(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn json_of(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout_of(args)).expect("stdout parses as JSON")
}

#[test]
fn invariants_char_zero_example() {
    let v = json_of(&["invariants", "--ring", "char=0; vars=x,y", "x^3+y^3"]);
    assert_eq!(v["tool"], "mutau");
    assert_eq!(v["command"], "invariants");
    assert!(v["version"].is_string());
    assert_eq!(v["config"]["ring"], "char=0; vars=x,y");
    let r = &v["record"];
    assert_eq!(r["mu"], 4);
    assert_eq!(r["tau"], 4);
    assert_eq!(r["mu_O"], 4);
    assert_eq!(r["ratio"], "1");
    assert_eq!(r["bound"], "4/3");
    assert_eq!(r["bound_satisfied"], true);
    assert_eq!(r["characteristic"], 0);
}

#[test]
fn invariants_char_three_example() {
    let v = json_of(&["invariants", "--ring", "char=3; vars=x,y", "x^3+y^4"]);
    let r = &v["record"];
    assert_eq!(r["tau"], 9);
    assert_eq!(r["mu"], "infinite");
    assert_eq!(r["mu_O"], 9);
    assert_eq!(r["ratio"], "1");
    assert_eq!(r["characteristic"], 3);
}

#[test]
fn invariants_missing_ring_is_usage_error() {
    let out = mutau(&["invariants", "x^2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "stderr shows usage: {err}");
}

#[test]
fn invariants_rejects_bad_input_with_exit_1() {
    let out = mutau(&["invariants", "--ring", "char=0; vars=x,y", "x^2 +++ y"]);
    assert_eq!(out.status.code(), Some(1));
    let out = mutau(&["invariants", "--ring", "char=4; vars=x,y", "x^2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = mutau(&[
        "invariants",
        "--ring",
        "char=0; vars=x,y,z",
        "x^4+y^4+z^4+x*y*z",
        "--budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "diagnostic names the budget: {err}");
}

#[test]
fn bound_table_exact_rows() {
    let text = stdout_of(&["bound-table", "5"]);
    for row in [
        "n,bound,preview",
        "2,4/3,1.333333",
        "3,3/2,1.500000",
        "4,192/115,1.669565",
        "5,20/11,1.818182",
    ] {
        assert!(text.contains(row), "missing row {row:?} in:\n{text}");
    }
    // Config is embedded as comment lines.
    assert!(text.starts_with("# tool: mutau"));
}

#[test]
fn hfun_value_example() {
    assert_eq!(stdout_of(&["hfun", "--s", "3/2", "--d", "2"]), "7/8\n");
    // Outside the support on both sides, and a derivative value.
    assert_eq!(stdout_of(&["hfun", "--s", "-1/2", "--d", "2"]), "0\n");
    assert_eq!(stdout_of(&["hfun", "--s", "7", "--d", "2"]), "1\n");
    assert_eq!(
        stdout_of(&["hfun", "--s", "1/2", "--d", "3", "--deriv"]),
        "1/8\n"
    );
}

#[test]
fn hfun_rejects_zero_denominator() {
    let out = mutau(&["hfun", "--s", "5/0", "--d", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn hk_csv_is_exact_for_monomial_ideal() {
    let text = stdout_of(&[
        "hk",
        "--ring",
        "char=2; vars=x,y",
        "x^2, y^3",
        "--emax",
        "3",
        "--format",
        "csv",
    ]);
    for row in ["e,q,colength,normalized", "1,2,24,6", "3,8,384,6"] {
        assert!(text.contains(row), "missing {row:?} in:\n{text}");
    }
}

#[test]
fn hs_levels_shrink_toward_the_volume() {
    let v = json_of(&[
        "hs",
        "--ring",
        "char=2; vars=x,y",
        "x, y",
        "--s",
        "1",
        "--emax",
        "3",
        "--es",
    ]);
    let levels = v["levels"].as_array().expect("levels array");
    let values: Vec<&str> = levels
        .iter()
        .map(|l| l["value"].as_str().expect("exact value"))
        .collect();
    // h_1 levels of the maximal ideal against itself over F_2; the limit is
    // H_1(2) = 1/2 and the finite levels halve the gap at each step.
    assert_eq!(values, ["3/4", "5/8", "9/16"]);
    let es: Vec<&str> = levels
        .iter()
        .map(|l| l["e_s"].as_str().expect("normalized value"))
        .collect();
    assert_eq!(es, ["3/2", "5/4", "9/8"]);
}

#[test]
fn family_csv_has_documented_columns_and_summary() {
    let text = stdout_of(&[
        "family", "--n", "5", "--d", "2", "--trials", "2", "--seed", "3",
    ]);
    assert!(text.contains("trial,seed,n,d,tau,mu,ratio"));
    assert!(text.contains("# summary: {"));
    // Every mu in this family equals (n-1)^2 = 16.
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7, "row shape: {line}");
        assert_eq!(cols[5], "16", "mu column: {line}");
    }
    let summary: serde_json::Value = serde_json::from_str(
        text.lines()
            .find(|l| l.starts_with("# summary: "))
            .and_then(|l| l.strip_prefix("# summary: "))
            .expect("summary line"),
    )
    .expect("summary is JSON");
    assert_eq!(summary["mu"], 16);
    assert_eq!(summary["bound"], "4/3");
    assert_eq!(summary["target"], "3/4");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "family", "--n", "5", "--d", "2", "--trials", "2", "--seed", "3",
        "--format", "json",
    ];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    let args = ["invariants", "--ring", "char=0; vars=x,y", "x^5+y^7"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn conjectures_runs_a_corpus_file_reproducibly() {
    let dir = tempfile::tempdir().expect("tempdir");
    let corpus = dir.path().join("corpus.txt");
    std::fs::write(
        &corpus,
        "# two instances\nchar=0; vars=x,y\nx^3+y^4\nchar=3; vars=x,y\nx^3+y^4\n",
    )
    .expect("write corpus");
    let path = corpus.to_str().expect("utf8 path");
    let v = json_of(&["conjectures", path]);
    assert_eq!(v["report"]["summary"]["instances"], 2);
    assert_eq!(v["report"]["summary"]["ok"], 2);
    assert_eq!(v["report"]["summary"]["errors"], 0);
    assert_eq!(v["report"]["summary"]["char_zero_contained_candidates"], 0);
    let records = v["report"]["records"].as_array().expect("records");
    assert_eq!(records[0]["contained_in_tj"], false);
    assert_eq!(records[1]["contained_in_tj"], true);
    assert_eq!(records[1]["violation_candidate"], true);
    // Byte-identical across runs.
    assert_eq!(
        stdout_of(&["conjectures", path]),
        stdout_of(&["conjectures", path])
    );
}

#[test]
fn out_flag_writes_the_payload_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("table.csv");
    let inline = stdout_of(&["bound-table", "4"]);
    let out = mutau(&[
        "bound-table",
        "4",
        "--out",
        path.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "payload goes to the file");
    let written = std::fs::read_to_string(Path::new(&path)).expect("file written");
    assert_eq!(written, inline);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(mutau(&["--help"]).status.code(), Some(0));
    assert_eq!(mutau(&["--version"]).status.code(), Some(0));
    let out = mutau(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}
