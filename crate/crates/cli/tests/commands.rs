//! Frozen command-level outputs. Every string here is part of the
//! interface: byte-identical output on byte-identical input.

use std::path::PathBuf;
use std::process::Command;

use tdl_cli::{run_command, CommandOutput};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.json"))
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> CommandOutput {
    run_command(args.iter().copied())
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stderr.is_empty());
    out.stdout
}

#[test]
fn validate_reports_shape() {
    let f = fixture("fig2");
    assert_eq!(
        ok(&["validate", "--input", &f]),
        "valid: 4 vertices, 7 edges, genus 4\n"
    );
    assert_eq!(
        ok(&["validate", "--input", &f, "--json"]),
        "{\"edges\":7,\"genus\":4,\"valid\":true,\"vertices\":4}\n"
    );
}

#[test]
fn genus_and_canonical() {
    assert_eq!(ok(&["genus", "--input", &fixture("fig2")]), "4\n");
    assert_eq!(ok(&["genus", "--input", &fixture("cycle2")]), "1\n");
    assert_eq!(
        ok(&["canonical", "--input", &fixture("k4")]),
        "(w1) + (w2) + (w3) + (w4)\ndegree 4\n"
    );
    // On the doubled edge every vertex has degree 2, so the canonical
    // divisor vanishes.
    assert_eq!(ok(&["canonical", "--input", &fixture("cycle2")]), "0\ndegree 0\n");
}

#[test]
fn burning_pass_matches_worked_example() {
    let f = fixture("fig2");
    assert_eq!(
        ok(&["dhar", "--input", &f, "--divisor", "D2", "--base", "v0"]),
        "S = {v1, v2, w4}\nN0 = {w3}\n"
    );
    assert_eq!(
        ok(&["dhar", "--input", &f, "--divisor", "D1", "--base", "v0"]),
        "S = {}\nN0 = {v1, w3}\nN1 = {w4}\n"
    );
    assert_eq!(
        ok(&["dhar", "--input", &f, "--divisor", "D2", "--base", "v0", "--json"]),
        "{\"layers\":[[{\"vertex\":\"w3\"}]],\"s\":[{\"vertex\":\"w4\"},\
         {\"edge\":\"e1\",\"offset\":\"1/2\"},{\"edge\":\"e3\",\"offset\":\"1/2\"}]}\n"
    );
}

#[test]
fn move_step_matches_worked_example() {
    let f = fixture("fig2");
    assert_eq!(
        ok(&["move-step", "--input", &f, "--divisor", "D2", "--base", "v0"]),
        "component 1: d = 1/2, debits 2(v1), landings (w1) + (w2)\n\
         component 2: d = 1/2, debits 2(w4) + (v2), landings (w3) + (v3) + (v4)\n\
         result: (w1) + (w2) + 2(w3) + (v3) + (v4)\n\
         degree 6\n"
    );
    assert_eq!(
        ok(&["move-step", "--input", &f, "--divisor", "D1", "--base", "v0"]),
        "already reduced: no move\n"
    );
}

#[test]
fn reduce_reaches_a_reduced_divisor() {
    let f = fixture("fig2");
    assert_eq!(
        ok(&["reduce", "--input", &f, "--divisor", "D2", "--base", "v0"]),
        "reduced: (w2) + (w3) + (v3) + (v4) + 2(v0)\ndegree 6\n"
    );
    assert_eq!(
        ok(&["is-reduced", "--input", &f, "--divisor", "D1", "--base", "v0"]),
        "true\n"
    );
    assert_eq!(
        ok(&["is-reduced", "--input", &f, "--divisor", "D2", "--base", "v0"]),
        "false\n"
    );
}

#[test]
fn rank_identity_check_prints_both_sides() {
    assert_eq!(
        ok(&["rr-check", "--input", &fixture("fig2"), "--divisor", "D2"]),
        "lhs 3 = rhs 3: OK\n"
    );
}

#[test]
fn rank_commands() {
    let f = fixture("fig2");
    assert_eq!(
        ok(&["rank", "--input", &f, "--divisor", "D2"]),
        "rank 2\nwitness: 3(w1)\n"
    );
    assert_eq!(
        ok(&["rank", "--input", &f, "--divisor", "D2", "--rr-shortcut"]),
        "rank 2\nwitness: 3(w1)\n"
    );
    assert_eq!(
        ok(&["restricted-rank", "--input", &f, "--divisor", "D2", "--set", "A"]),
        "rank 2\nwitness: (v1) + (v2) + (v3)\n"
    );
    assert_eq!(
        ok(&["restricted-rank", "--input", &f, "--divisor", "D2", "--set", "W"]),
        "rank 2\nwitness: 3(w1)\n"
    );
    assert_eq!(ok(&["fg-rank", "--input", &fixture("k4"), "--divisor", "K"]), "2\n");
}

#[test]
fn empty_check_finds_a_representative() {
    assert_eq!(
        ok(&["empty-check", "--input", &fixture("fig2"), "--divisor", "D1"]),
        "nonempty: (w3) + 2(w4) + (v1)\n"
    );
}

#[test]
fn support_locus_covers_everything_for_positive_rank() {
    assert_eq!(
        ok(&["support-locus", "--input", &fixture("fig2"), "--divisor", "D2"]),
        "vertices: {e3@1/2, e6@1/2, e7@1/2, w1, w2, w3, w4}\n\
         edges: {e1, e2, e3.0, e3.1, e4, e5, e6.0, e6.1, e7.0, e7.1}\n\
         regions: 0\n"
    );
}

#[test]
fn rank_determining_verdicts() {
    let k4 = fixture("k4");
    let c2 = fixture("cycle2");
    assert_eq!(ok(&["is-rds", "--input", &k4, "--set", "A"]), "true\n");
    assert_eq!(ok(&["is-rds", "--input", &k4, "--set", "OMEGA"]), "true\n");
    assert_eq!(ok(&["is-rds", "--input", &c2, "--set", "P"]), "true\n");
    assert_eq!(
        ok(&["is-rds", "--input", &c2, "--set", "S1"]),
        "false\nwitness: (w1)\n"
    );
    assert_eq!(
        ok(&["is-rds", "--input", &c2, "--set", "S1", "--json"]),
        "{\"rds\":false,\"witness\":[{\"coeff\":1,\"vertex\":\"w1\"}]}\n"
    );
    assert_eq!(
        ok(&["rds-witness", "--input", &c2, "--set", "S1"]),
        "witness: (w1)\nregion: {w2}\n"
    );
    assert_eq!(
        ok(&["rds-witness", "--input", &k4, "--set", "OMEGA"]),
        "rank-determining: no witness\n"
    );
}

#[test]
fn closure_commands() {
    assert_eq!(
        ok(&["l-closure", "--input", &fixture("cycle2"), "--set", "S1"]),
        "vertices: {w1}\nedges: {}\nwhole: false\n"
    );
    assert_eq!(
        ok(&["l-closure", "--input", &fixture("k4"), "--set", "OMEGA"]),
        "vertices: {w1, w2, w3, w4}\nedges: {e1, e2, e3, e4, e5, e6}\nwhole: true\n"
    );
}

#[test]
fn minimality_commands() {
    let k4 = fixture("k4");
    assert_eq!(
        ok(&["min-rds-check", "--input", &fixture("cycle2"), "--set", "P"]),
        "minimal: true\n"
    );
    assert_eq!(ok(&["min-rds-check", "--input", &k4, "--set", "A"]), "minimal: true\n");
    assert_eq!(
        ok(&["min-rds-check", "--input", &k4, "--set", "OMEGA"]),
        "minimal: false\nremovable: {w1, w2, w3, w4}\n"
    );
    assert_eq!(
        ok(&["min-rds-search", "--input", &k4, "--set", "OMEGA"]),
        "{w1, w2, w3}\n{w1, w2, w4}\n{w1, w3, w4}\n{w2, w3, w4}\nfound 4\n"
    );
    assert_eq!(
        ok(&["min-rds-search", "--input", &k4, "--set", "OMEGA", "--max-size", "2"]),
        "found 0\n"
    );
}

#[test]
fn spanning_construction_yields_genus_plus_one_points() {
    assert_eq!(
        ok(&["rds-construct", "--input", &fixture("k4")]),
        "set: {e4@1/2, e5@1/2, e6@1/2, w1}\nsize 4\n"
    );
    assert_eq!(
        ok(&["rds-construct", "--input", &fixture("k4"), "--base", "w3"]),
        "set: {e4@1/2, e5@1/2, e6@1/2, w3}\nsize 4\n"
    );
}

#[test]
fn outputs_are_deterministic() {
    let f = fixture("fig2");
    let args = ["support-locus", "--input", &f, "--divisor", "D2", "--json"];
    assert_eq!(ok(&args), ok(&args));
    let args = ["reduce", "--input", &f, "--divisor", "D2", "--base", "v0", "--json"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn json_outputs_parse() {
    let f = fixture("fig2");
    for args in [
        vec!["canonical", "--input", &f],
        vec!["reduce", "--input", &f, "--divisor", "D2", "--base", "v0"],
        vec!["move-step", "--input", &f, "--divisor", "D2", "--base", "v0"],
        vec!["rank", "--input", &f, "--divisor", "D2"],
        vec!["support-locus", "--input", &f, "--divisor", "D2"],
        vec!["rr-check", "--input", &f, "--divisor", "D2"],
    ] {
        let mut args = args.clone();
        args.push("--json");
        let out = ok(&args);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.is_object(), "{args:?}");
    }
}

// -- failure modes ----------------------------------------------------------

#[test]
fn input_errors_exit_one() {
    let f = fixture("fig2");
    let out = run(&["genus", "--input", "/nonexistent/x.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.starts_with("error: "), "{}", out.stderr);

    let out = run(&["rank", "--input", &f, "--divisor", "NOPE"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unknown divisor \"NOPE\""), "{}", out.stderr);

    let out = run(&["reduce", "--input", &f, "--divisor", "D2", "--base", "zzz"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unknown point \"zzz\""), "{}", out.stderr);

    let out = run(&["is-rds", "--input", &f, "--set", "MISSING"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unknown set"), "{}", out.stderr);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["rank", "--input", &fixture("fig2")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--divisor"), "{}", out.stderr);

    let out = run(&["no-such-command"]);
    assert_eq!(out.code, 2);

    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Usage: tdl"));
}

#[test]
fn exhausted_caps_exit_three() {
    let out = run(&["rank", "--input", &fixture("fig2"), "--divisor", "D2", "--cap", "3"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("cap 3 exceeded"), "{}", out.stderr);
}

#[test]
fn base_point_accepts_edge_at_offset() {
    // v0 names the midpoint of e6, so spelling it as e6@1/2 is equivalent.
    let f = fixture("fig2");
    assert_eq!(
        ok(&["dhar", "--input", &f, "--divisor", "D2", "--base", "e6@1/2"]),
        ok(&["dhar", "--input", &f, "--divisor", "D2", "--base", "v0"]),
    );
}

// -- environment cap, via the real binary for isolation ---------------------

#[test]
fn cap_environment_variable_applies_and_flag_wins() {
    let exe = env!("CARGO_BIN_EXE_tdl");
    let f = fixture("fig2");

    let out = Command::new(exe)
        .args(["rank", "--input", &f, "--divisor", "D2"])
        .env("TDL_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = Command::new(exe)
        .args(["rank", "--input", &f, "--divisor", "D2", "--cap", "100000"])
        .env("TDL_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("rank 2"));

    let out = Command::new(exe)
        .args(["rank", "--input", &f, "--divisor", "D2"])
        .env("TDL_CAP", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
