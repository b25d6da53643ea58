//! End-to-end tests of the `vasseq` binary: exit codes, text output and the
//! machine-readable format.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIG1: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fig1.2cm");
const LOOP: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/loop.2cm");

fn vasseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vasseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Builds A and B for the Figure 1 machine into a temp dir and returns their
/// paths.
fn built_pair(dir: &TempDir) -> (PathBuf, PathBuf) {
    let a = dir.path().join("a.vass");
    let b = dir.path().join("b.vass");
    let out = vasseq(&["build", "a", FIG1, "--out", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    let out = vasseq(&["build", "b", FIG1, "--out", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    (a, b)
}

#[test]
fn validate_accepts_the_shipped_machines() {
    for file in [FIG1, LOOP] {
        let out = vasseq(&["validate", file]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains("valid 2cm"));
    }
}

#[test]
fn validate_rejects_garbage_with_exit_3() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.2cm");
    std::fs::write(&bad, "2cm q_i q_f\nq_i frobnicate q_f\n").unwrap();
    let out = vasseq(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}

#[test]
fn missing_file_is_exit_3() {
    let out = vasseq(&["validate", "/nonexistent/machine.2cm"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn run_reports_the_halting_trace() {
    let out = vasseq(&["run", FIG1]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("halted after 2 steps: inc_1 z_2"));
    let out = vasseq(&["run", LOOP, "--fuel", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("still running after 10 steps"));
}

#[test]
fn eq_of_a_vass_with_itself_is_exit_0() {
    let dir = TempDir::new().unwrap();
    let (a, _) = built_pair(&dir);
    let a = a.to_str().unwrap();
    let out = vasseq(&["eq", a, a]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("no difference up to length 8"));
}

#[test]
fn eq_finds_the_halting_word_at_the_right_bound() {
    let dir = TempDir::new().unwrap();
    let (a, b) = built_pair(&dir);
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let out = vasseq(&["eq", a, b, "--maxlen", "4"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("inc_1 z_2 z_2 h"));
    assert!(stdout(&out).contains("first input only"));
    let out = vasseq(&["eq", a, b, "--maxlen", "3"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn contain_agrees_with_the_inclusion_direction() {
    let dir = TempDir::new().unwrap();
    let (a, b) = built_pair(&dir);
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let out = vasseq(&["contain", b, a, "--maxlen", "10"]);
    assert_eq!(code(&out), 0);
    let out = vasseq(&["contain", a, b, "--maxlen", "4"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("inc_1 z_2 z_2 h"));
}

#[test]
fn sim_exit_codes_follow_the_verdict() {
    let dir = TempDir::new().unwrap();
    let (a, b) = built_pair(&dir);
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let out = vasseq(&["sim", a, b, "--depth", "6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("no refutation up to depth 6"));
    let out = vasseq(&["sim", b, a, "--depth", "6"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("Spoiler wins in 4 rounds"));
    let out = vasseq(&["twosim", a, b, "--depth", "6"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn tiny_budget_is_exit_2() {
    let dir = TempDir::new().unwrap();
    let (a, b) = built_pair(&dir);
    let out = vasseq(&["--budget", "1", "eq", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn build_b_dot_renders_all_ten_states() {
    let dir = TempDir::new().unwrap();
    let dot_path = dir.path().join("b.dot");
    let out = vasseq(&["build", "b", FIG1, "--dot", dot_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph"));
    // One node statement per state; edges use `->` and never `[shape`-only
    // node syntax, so counting node lines is reliable.
    let nodes = dot.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("->")).count();
    assert_eq!(nodes, 10, "dot output:\n{dot}");
    assert!(dot.contains("q_1!2@B"));
}

#[test]
fn lang_lists_words_in_enumeration_order() {
    let dir = TempDir::new().unwrap();
    let (a, _) = built_pair(&dir);
    let out = vasseq(&["lang", a.to_str().unwrap(), "--maxlen", "2"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(lines, vec!["\"\"", "\"inc_1\"", "\"inc_1 z_2\""]);
}

#[test]
fn resolver_check_passes_on_figure_1() {
    let out = vasseq(&["resolver-check", FIG1, "--maxlen", "8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("up to length 8"));
}

#[test]
fn theorem_passes_on_both_shipped_machines() {
    let out = vasseq(&["theorem", FIG1, "--maxlen", "6"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("machine halts"));
    assert!(text.contains("inc_1 z_2 z_2 h"));
    assert!(!text.contains("FAIL"));
    let out = vasseq(&["theorem", LOOP, "--maxlen", "6"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("does not halt"));
}

#[test]
fn machine_readable_output_is_json_and_stable() {
    let dir = TempDir::new().unwrap();
    let (a, b) = built_pair(&dir);
    let args = [
        "--format",
        "machine-readable",
        "eq",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--maxlen",
        "4",
    ];
    let mut docs = Vec::new();
    for _ in 0..2 {
        let out = vasseq(&args);
        assert_eq!(code(&out), 1);
        let mut doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["verdict"], "distinguished");
        assert_eq!(doc["witness"], serde_json::json!(["inc_1", "z_2", "z_2", "h"]));
        assert!(doc["stats"]["nodes_explored"].as_u64().unwrap() > 0);
        // Wall time is the only field allowed to vary between runs.
        doc["stats"].as_object_mut().unwrap().remove("wall_ms");
        docs.push(doc);
    }
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn build_writes_a_reparseable_document() {
    let dir = TempDir::new().unwrap();
    let (_, b) = built_pair(&dir);
    let text = std::fs::read_to_string(Path::new(&b)).unwrap();
    assert!(text.starts_with("dimension 2"));
    let out = vasseq(&["lang", b.to_str().unwrap(), "--maxlen", "1", "--semantics", "cover"]);
    assert_eq!(code(&out), 0);
}
