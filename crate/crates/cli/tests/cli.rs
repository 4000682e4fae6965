use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rtfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtfa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn zoo(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.txt"));
    let o = rtfa(&["zoo", name, "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn eval_prints_exact_probabilities() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq");
    let o = rtfa(&["eval", m.to_str().unwrap(), "ab", "a"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let ab = out.lines().find(|l| l.starts_with("ab ")).expect("row for ab");
    let cells: Vec<&str> = ab.split_whitespace().collect();
    assert_eq!(cells[3], "3/4");
    assert_eq!(cells[5], "true");
    assert_eq!(cells[6], "4096");
    assert!(out.contains("192/1217"));
}

#[test]
fn tsv_output_is_tab_separated() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq");
    let o = rtfa(&["--tsv", "eval", m.to_str().unwrap(), "ab"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0].split('\t').count(), 7);
    assert_eq!(lines[1].split('\t').nth(3), Some("3/4"));
}

#[test]
fn classify_passes_and_fails() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq");
    let path = m.to_str().unwrap();
    let ok = rtfa(&["classify", path, "--lang", "eq", "--mode", "bounded", "--epsilon", "1/4", "--max-len", "8"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS, 0 counterexamples"));

    let bad = rtfa(&["classify", path, "--lang", "pal", "--mode", "bounded", "--epsilon", "1/4", "--max-len", "4"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("FAIL"));

    let regex = rtfa(&["classify", path, "--lang", "regex:(ab|ba)*", "--mode", "bounded", "--epsilon", "1/4", "--max-len", "4"]);
    assert_eq!(regex.status.code(), Some(1));
}

#[test]
fn classify_needs_its_parameters() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq");
    let o = rtfa(&["classify", m.to_str().unwrap(), "--lang", "eq", "--mode", "bounded"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--epsilon"));
    let o = rtfa(&["classify", m.to_str().unwrap(), "--lang", "eq", "--mode", "bounded", "--epsilon", "one quarter"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn amplify_once_is_identity() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq-post");
    let out = dir.path().join("amp.txt");
    let o = rtfa(&["convert", m.to_str().unwrap(), "--to", "amplify:1", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&m).unwrap(), std::fs::read_to_string(&out).unwrap());
}

#[test]
fn convert_round_trip_keeps_verdicts() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq");
    let post = dir.path().join("post.txt");
    let back = dir.path().join("back.txt");
    assert!(rtfa(&["convert", m.to_str().unwrap(), "--to", "post", "-o", post.to_str().unwrap()]).status.success());
    assert!(rtfa(&["convert", post.to_str().unwrap(), "--to", "restart", "-o", back.to_str().unwrap()]).status.success());
    let f = |p: &Path| {
        let out = stdout(&rtfa(&["--tsv", "eval", p.to_str().unwrap(), "aab", "ba"]));
        out.lines().skip(1).map(|l| l.split('\t').nth(3).unwrap().to_string()).collect::<Vec<_>>()
    };
    assert_eq!(f(&m), f(&back));
}

#[test]
fn verify_passes() {
    let o = rtfa(&["verify", "--max-len", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn monte_carlo_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let m = zoo(dir.path(), "leq");
    let run = |seed: &str| stdout(&rtfa(&["mc", m.to_str().unwrap(), "", "--trials", "500", "--seed", seed]));
    assert_eq!(run("7"), run("7"));
    assert!(run("7").contains("trials 500"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.txt");
    let o = rtfa(&["eval", missing.to_str().unwrap(), "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let garbage = dir.path().join("garbage.txt");
    std::fs::write(&garbage, "kind: nonsense\n").unwrap();
    assert_eq!(rtfa(&["eval", garbage.to_str().unwrap(), "a"]).status.code(), Some(2));

    assert_eq!(rtfa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rtfa(&["zoo", "unicorn"]).status.code(), Some(2));

    let m = zoo(dir.path(), "leq");
    assert_eq!(rtfa(&["eval", m.to_str().unwrap(), "abc"]).status.code(), Some(2));
    assert_eq!(rtfa(&["convert", m.to_str().unwrap(), "--to", "union"]).status.code(), Some(2));
}
