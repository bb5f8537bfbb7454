use std::collections::HashMap;
use std::process::{Command, Output};

use tempfile::TempDir;
use ulcode_core::rational::{format_rational, parse_rational};
use ulcode_core::Rational;

fn ulcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulcode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn summary_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("# {key}\t")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .to_string()
}

/// Table output: the value column of the line starting with `key`.
fn table_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|rest| rest.trim().to_string()))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn four_word_totals() {
    let dir = TempDir::new().unwrap();
    let unequal = write(&dir, "unequal.txt", "1 3\n2 2 1 1\n");
    let equal = write(&dir, "equal.txt", "1 1\n2 2 1 1\n");
    let out = ulcode(&["solve", &unequal, "--epsilon", "0.25"]);
    assert!(out.status.success());
    assert_eq!(table_value(&stdout(&out), "total cost"), "21");
    let out = ulcode(&["solve", &equal]);
    assert!(out.status.success());
    assert_eq!(table_value(&stdout(&out), "total cost"), "12");
}

#[test]
fn empty_file_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.txt", "");
    let out = ulcode(&["solve", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 1"));
}

#[test]
fn parse_errors_report_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "1 2\n3 0 1\n");
    let out = ulcode(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 3"));
    let missing = dir.path().join("missing.txt");
    assert_eq!(ulcode(&["exact", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn printed_codewords_rescore_to_the_printed_total() {
    let dir = TempDir::new().unwrap();
    let costs = ["5/2", "1", "3/2"];
    let glyphs = ['x', 'y', 'z'];
    let path = write(&dir, "mixed.txt", "5/2 1 3/2\n1 7 3 3 2 9 4\nx y z\n");
    let out = ulcode(&["solve", &path, "--epsilon", "1/3", "--emit", "tsv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let cost_of: HashMap<char, Rational> = glyphs
        .iter()
        .zip(costs)
        .map(|(&g, c)| (g, parse_rational(c).unwrap()))
        .collect();
    let mut words = Vec::new();
    let mut total = Rational::from_integer(0.into());
    for line in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let weight = parse_rational(cols[1]).unwrap();
        let cost: Rational = cols[2].chars().map(|c| cost_of[&c].clone()).sum();
        assert_eq!(format_rational(&cost), cols[3]);
        total += weight * cost;
        words.push(cols[2].to_string());
    }
    assert_eq!(words.len(), 7);
    assert_eq!(format_rational(&total), summary_value(&text, "total_cost"));
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            assert!(!a.starts_with(b.as_str()) && !b.starts_with(a.as_str()), "{a} {b}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "det.txt", "1 2 2 5\n9 1 4 4 6 2 8 3 3 1 7 5\n");
    let runs: Vec<Vec<u8>> = [
        vec!["solve", &path, "--epsilon", "0.4"],
        vec!["--threads", "1", "solve", &path, "--epsilon", "0.4"],
        vec!["--threads", "4", "solve", &path, "--epsilon", "0.4"],
    ]
    .iter()
    .map(|args| {
        let out = ulcode(args);
        assert!(out.status.success());
        out.stdout
    })
    .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);
}

#[test]
fn verify_four_word_example() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "fig.txt", "1 3\n2 2 1 1\n");
    let out = ulcode(&["verify", &path, "--epsilon", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(table_value(&stdout(&out), "ratio"), "1");
}

#[test]
fn exact_single_word() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "one.txt", "2 3\n5\n");
    let out = ulcode(&["exact", &path]);
    assert!(out.status.success());
    let text = stdout(&out);
    // p_1 * l_1 with p_1 = 1, in raw weight units and relative to l_2.
    assert_eq!(table_value(&text, "optimal cost"), "10");
    assert!(table_value(&text, "normalized cost").starts_with("2/3"));
}

#[test]
fn graph_stats_within_node_bound() {
    let dir = TempDir::new().unwrap();
    let weights: Vec<String> = (0..100u64).map(|i| ((i * 7919 + 13) % 97 + 1).to_string()).collect();
    let path = write(&dir, "g.txt", &format!("1 2 3\n{}\n", weights.join(" ")));
    let out = ulcode(&["graph-stats", &path, "--epsilon", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let nodes: u64 = table_value(&text, "nodes ").parse().unwrap();
    let bound = table_value(&text, "node bound nk/eps");
    let bound = parse_rational(bound.split_whitespace().next().unwrap()).unwrap();
    assert!(Rational::from_integer(nodes.into()) <= bound);
    assert_eq!(table_value(&text, "within bounds"), "yes");
}

#[test]
fn budget_abort_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "b.txt", "1 2 3\n9 8 7 6 5 4 3 2 1\n");
    let out = ulcode(&["solve", &path, "--epsilon", "1/10", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_k_is_rejected() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "k.txt", "1 1\n1 1 1\n");
    let out = ulcode(&["solve", &path, "--k", "7/3"]);
    assert_eq!(out.status.code(), Some(1));
    let ok = ulcode(&["solve", &path, "--k", "3"]);
    assert!(ok.status.success());
}

#[test]
fn bench_ladder_rows() {
    let out = ulcode(&["bench", "n:16..64"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4);
    assert_eq!(ulcode(&["bench", "nope"]).status.code(), Some(1));
}
