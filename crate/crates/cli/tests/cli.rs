use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphical"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_accepts_good_files() {
    let o = run(&["validate", &fixture("c2.graph"), &fixture("collapse.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok: 3 graphs, 1 maps"));
}

#[test]
fn input_errors_exit_two_with_code_and_file() {
    let o = run(&["validate", &fixture("bad_involution.graph")]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("error[DuplicateIdentifier]"), "{err}");
    assert!(err.contains("bad_involution.graph: line 1"), "{err}");

    let o = run(&["validate", &fixture("nodeless_safe.graph")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NodelessLoopInSafeMode"));

    let o = run(&["validate", &fixture("does_not_exist.graph")]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["segal", "--presheaf", "nope", &fixture("table.graph")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: unknown presheaf"));
}

#[test]
fn nodeless_loop_in_extended_mode() {
    let o = run(&["info", &fixture("nodeless.graph")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degree: core n/a, extended 2"), "{out}");
    assert!(out.contains("safe: no"));
}

#[test]
fn c2_has_seven_embedding_classes() {
    let o = run(&["embeddings", &fixture("c2.graph")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("C2: 7 classes"), "{out}");
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with("edge")).count(), 2);
}

#[test]
fn iso_exit_codes() {
    let o = run(&["iso", &fixture("c2.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4 automorphisms"));
    let o = run(&["iso", &fixture("c2.graph"), &fixture("l2.graph")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn listed_maps_parse_back() {
    let o = run(&["maps", &fixture("collapse.graph"), "--graph", "C2", "--graph", "C1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("4 maps C2 -> C1"));
    let dir = tempfile::tempdir().unwrap();
    let maps = dir.path().join("maps.graph");
    let body: String = out.lines().skip(1).map(|l| format!("{l}\n")).collect();
    std::fs::write(&maps, body).unwrap();
    let o = run(&["validate", &fixture("collapse.graph"), maps.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("5 maps"));
}

#[test]
fn reedy_factorization_of_the_collapse_round_trips() {
    let o = run(&["factor", "--mode", "reedy", &fixture("collapse.graph")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\"in_minus\":true"));
    for name in ["map degeneracy : C2 -> middle", "map inner : middle -> image", "map outer : image -> C1"] {
        assert!(out.contains(name), "{out}");
    }
    // the printed pieces are valid input, and compose back to the fold
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("reedy.graph");
    std::fs::write(&f, out).unwrap();
    let o = run(&["validate", &fixture("collapse.graph"), f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&[
        "compose",
        &fixture("collapse.graph"),
        f.to_str().unwrap(),
        "--map",
        "degeneracy",
        "--map",
        "inner",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("map composite : C2 -> image"));
}

#[test]
fn substitution_into_a_star() {
    let o = run(&["substitute", &fixture("substitute.graph")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("# betti1 additive: yes"));
    assert_eq!(out.lines().filter(|l| l.starts_with("vertex")).count(), 2);
}

#[test]
fn segal_terminal_on_degree_two() {
    let o = run(&["segal", "--presheaf", "terminal", "--corpus", "degree2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("strict Segal: yes, monochrome: yes"));
    let o = run(&["segal", "--presheaf", "two", &fixture("table.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("strict Segal: yes, monochrome: no"));
}

#[test]
fn kan_extension_of_arc_colorings() {
    let o = run(&["kan-nodeless", "--presheaf", "arc-coloring", "--palette", "free2", "--truncation", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 families"));
}

#[test]
fn stable_reports_unstable_graph() {
    let o = run(&["stable", &fixture("stable.graph")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("T: stable yes, total genus 2"));
    assert!(out.contains("U: stable no"));
}

#[test]
fn audit_json_report() {
    let o = run(&["--json", "audit", "--corpus", "degree1", "--mode", "core"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ok"], true);
    assert!(v["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn directory_corpus_is_closed_before_auditing() {
    let o = run(&["audit", "--corpus", &fixture("corpus")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("audit: pass\n"));
}
