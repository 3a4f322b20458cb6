use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dfacons::automata::{Alphabet, DfaBuilder};
use dfacons::cli::{EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_UNKNOWN, EXIT_UNSAT, EXIT_USAGE};
use dfacons::counterexamples::{dlh_instance, fernau_instance};
use dfacons::formats::{parse_dfa, parse_sample, write_dfa, write_sample};
use tempfile::TempDir;

const THREE_CLAUSE_CNF: &str = "c ¬x0 ∧ x1 ∧ x2\np cnf 3 3\n-1 0\n2 0\n3 0\n";

fn dfacons(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfacons"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().unwrap()
}

fn put(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn reduce_gold_prints_sizes() {
    let dir = TempDir::new().unwrap();
    let cnf = put(&dir, "small.cnf", THREE_CLAUSE_CNF);
    let out = dir.path().join("small.sample");
    let result = dfacons(&["reduce", s(&cnf), "--construction", "gold", "-o", s(&out)]);
    assert_eq!(code(&result), EXIT_OK);
    assert_eq!(stdout(&result), "k=6 |P|=4 |N|=21\n");
    let sample = parse_sample(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sample.len(), 25);
}

#[test]
fn reduce_dlh_reproduces_published_sets() {
    let dir = TempDir::new().unwrap();
    let instance = dlh_instance();
    let cnf = put(&dir, "dlh.cnf", &instance.cnf.to_dimacs());
    let out = dir.path().join("dlh.sample");
    let result = dfacons(&["reduce", s(&cnf), "--construction", "dlh", "-o", s(&out)]);
    assert_eq!(code(&result), EXIT_OK);
    assert!(stdout(&result).starts_with("k=8 "));
    let sample = parse_sample(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sample, instance.sample);

    let result = dfacons(&["reduce", s(&cnf), "--construction", "dlh", "--dlh-bound", "n+1", "-o", s(&out)]);
    assert!(stdout(&result).starts_with("k=9 "));
}

#[test]
fn reduce_rejects_mixed_polarity() {
    let dir = TempDir::new().unwrap();
    let cnf = put(&dir, "mixed.cnf", "p cnf 2 1\n1 -2 0\n");
    let result = dfacons(&["reduce", s(&cnf), "-o", s(&dir.path().join("x"))]);
    assert_eq!(code(&result), EXIT_INPUT);
    assert!(String::from_utf8_lossy(&result.stderr).contains("mixes positive and negative"));
}

#[test]
fn solve_sat_unsat_and_usage() {
    let dir = TempDir::new().unwrap();
    let cnf = put(&dir, "small.cnf", THREE_CLAUSE_CNF);
    let gold = dir.path().join("gold.sample");
    let dlh = dir.path().join("dlh.sample");
    dfacons(&["reduce", s(&cnf), "-o", s(&gold)]);
    dfacons(&["reduce", s(&cnf), "--construction", "dlh", "-o", s(&dlh)]);

    let sat = dfacons(&["solve", s(&gold), "--k", "6", "--dot"]);
    assert_eq!(code(&sat), EXIT_OK);
    let text = stdout(&sat);
    assert!(text.starts_with("SAT\nstates 6 initial 0\n"));
    assert!(text.contains("digraph dfa {"));

    let unsat = dfacons(&["solve", s(&dlh), "--k", "3"]);
    assert_eq!(code(&unsat), EXIT_UNSAT);
    assert_eq!(stdout(&unsat), "UNSAT\n");

    let parallel = dfacons(&["solve", s(&dlh), "--k", "3", "--parallel"]);
    assert_eq!(code(&parallel), EXIT_UNSAT);

    let json = dfacons(&["solve", s(&gold), "--k", "6", "--json"]);
    let record: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(record["result"], "SAT");
    assert_eq!(record["states"], 6);

    assert_eq!(code(&dfacons(&["solve", s(&gold), "--k", "0"])), EXIT_USAGE);
}

#[test]
fn solve_budget_exhaustion_is_unknown() {
    let dir = TempDir::new().unwrap();
    let sample = put(&dir, "dlh8.sample", &write_sample(&dlh_instance().sample));
    let result = dfacons(&["solve", s(&sample), "--k", "9", "--budget", "0"]);
    assert_eq!(code(&result), EXIT_UNKNOWN);
    assert_eq!(stdout(&result), "UNKNOWN\n");
}

#[test]
fn check_fernau_and_violation() {
    let dir = TempDir::new().unwrap();
    let instance = fernau_instance();
    let sample = put(&dir, "fernau.sample", &write_sample(&instance.sample));
    let dfa = put(&dir, "fernau.dfa", &write_dfa(&instance.dfa));
    let result = dfacons(&["check", s(&sample), s(&dfa)]);
    assert_eq!(code(&result), EXIT_OK);
    assert_eq!(stdout(&result), "CONSISTENT\n");

    // t is state 0, f is state 11
    let broken = instance.dfa.with_transition(0, 1, 11).unwrap();
    let broken = put(&dir, "broken.dfa", &write_dfa(&broken));
    let result = dfacons(&["check", s(&sample), s(&broken)]);
    assert_eq!(code(&result), EXIT_FAILED);
    assert_eq!(stdout(&result), "VIOLATION b positive\n");

    let empty = put(&dir, "empty.sample", "0 2\n");
    assert_eq!(stdout(&dfacons(&["check", s(&empty), s(&dfa)])), "CONSISTENT\n");
}

#[test]
fn check_rejects_partial_table() {
    let dir = TempDir::new().unwrap();
    let sample = put(&dir, "s.sample", "1 2\n1 0\n");
    let partial = put(&dir, "p.dfa", "states 1 initial 0\naccepting 0\n0 a 0\n");
    let result = dfacons(&["check", s(&sample), s(&partial)]);
    assert_eq!(code(&result), EXIT_INPUT);
    assert!(String::from_utf8_lossy(&result.stderr).contains("missing transition"));
}

#[test]
fn witness_and_extract() {
    let dir = TempDir::new().unwrap();
    let cnf = put(&dir, "small.cnf", THREE_CLAUSE_CNF);
    let dfa_path = dir.path().join("small.dfa");
    let dot_path = dir.path().join("small.dot");
    let result = dfacons(&["witness", s(&cnf), "011", "-o", s(&dfa_path), "--dot", s(&dot_path)]);
    assert_eq!(code(&result), EXIT_OK);

    let mut expected = DfaBuilder::new(Alphabet::binary(), 6).unwrap();
    for (q, (a, b)) in [(1, 3), (2, 4), (3, 5), (4, 3), (5, 0), (0, 0)].into_iter().enumerate() {
        expected.set_transition(q, 0, a).unwrap().set_transition(q, 1, b).unwrap();
    }
    expected.set_accepting(0, true).unwrap();
    let written = parse_dfa(&fs::read_to_string(&dfa_path).unwrap(), &Alphabet::binary()).unwrap();
    assert_eq!(written, expected.build().unwrap());
    assert!(fs::read_to_string(&dot_path).unwrap().contains("s3 -> s3 [label=\"b\"]"));

    let result = dfacons(&["extract", s(&cnf), s(&dfa_path)]);
    assert_eq!(code(&result), EXIT_OK);
    assert_eq!(stdout(&result), "011 SATISFIES\n");

    let result = dfacons(&["witness", s(&cnf), "111"]);
    assert_eq!(code(&result), EXIT_INPUT);
    assert!(String::from_utf8_lossy(&result.stderr).contains("clause 0"));
}

#[test]
fn verify_paper_text_and_json() {
    let result = dfacons(&["verify-paper"]);
    assert_eq!(code(&result), EXIT_OK);
    let text = stdout(&result);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.contains(" PASS ")));
    let dlh = lines.iter().find(|l| l.starts_with("dlh-3state")).unwrap();
    assert!(dlh.contains("UNSAT@k=3"));

    let result = dfacons(&["verify-paper", "--json"]);
    let names: Vec<String> = stdout(&result)
        .lines()
        .map(|l| {
            let record: serde_json::Value = serde_json::from_str(l).unwrap();
            assert_eq!(record["status"], "PASS");
            assert_eq!(record["report"]["consistency_verified"], true);
            record["report"]["name"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(names, ["fernau-lemma15", "dlh-thm621", "dlh-3state", "mealy-gap", "gold-fig1"]);
}
