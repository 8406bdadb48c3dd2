//! Black-box tests of the `chipfire` binary: exit-code contract, text
//! output, JSON output, and seeded determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chipfire"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Writes a graph file into the target tmp dir and returns its path.
fn graph_file(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).expect("tmpdir");
    let path = dir.join(name);
    std::fs::write(&path, text).expect("fixture written");
    path
}

fn p2() -> String {
    graph_file("p2.txt", "n 2\n0 1\n").display().to_string()
}

fn p3() -> String {
    graph_file("p3.txt", "n 3\n0 1\n1 2\n").display().to_string()
}

#[test]
fn check_encodes_the_answer_in_the_exit_code() {
    let yes = run(&["check", &p3(), "1,0,1"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(stdout(&yes), "self-reachable\n");

    let no = run(&["check", &p3(), "0,1,0"]);
    assert_eq!(code(&no), 1);
    assert_eq!(stdout(&no), "not self-reachable\n");
}

#[test]
fn fire_prints_the_resulting_configuration() {
    let out = run(&["fire", &p2(), "2,0", "0,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0,2\n");
}

#[test]
fn count_prints_the_number() {
    let out = run(&["count", "2", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "4\n");
}

#[test]
fn enumerate_lists_the_class() {
    let out = run(&["enumerate", &p3(), "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines: Vec<&str> = text.lines().collect();
    lines.sort_unstable();
    assert_eq!(lines, vec!["0,1,1", "0,2,0", "1,0,1", "1,1,0"]);
}

#[test]
fn reach_lists_reachable_configurations() {
    let out = run(&["reach", &p2(), "2,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0,2\n1,1\n2,0\n");
}

#[test]
fn usage_problems_exit_2() {
    assert_eq!(code(&run(&["check", "/nonexistent/graph.txt", "1,0"])), 2);
    assert_eq!(code(&run(&["check", &p3(), "1,0"])), 2); // wrong length
    assert_eq!(code(&run(&["count", "2", "0"])), 2);
    assert_eq!(code(&run(&["verify", "--max-n", "8"])), 2);
    assert_eq!(code(&run(&["no-such-subcommand"])), 2);
    assert_eq!(code(&run(&["fire", &p2(), "0,0", "0"])), 2); // illegal fire
}

#[test]
fn tripped_guards_exit_3() {
    let out = run(&["reach", &p3(), "9,9,9", "--state-guard", "5"]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("guard exceeded"), "stderr: {err}");
}

#[test]
fn witness_round_trips_through_json() {
    let plain = run(&["witness", &p2(), "2,0", "1,1"]);
    assert_eq!(code(&plain), 0);
    assert_eq!(stdout(&plain), "0,1,0\n");

    let json = run(&["witness", &p2(), "2,0", "1,1", "--json"]);
    assert_eq!(code(&json), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid JSON");
    assert_eq!(value["from"], "2,0");
    assert_eq!(value["to"], "1,1");
    // the witness replays through the library
    use std::str::FromStr;
    let g = chipfire::graph::Graph::from_str("n 2\n0 1\n").unwrap();
    let from = chipfire::firing::ChipConfig::from_str(value["from"].as_str().unwrap()).unwrap();
    let seq =
        chipfire::firing::FiringSequence::from_str(value["seq"].as_str().unwrap()).unwrap();
    let to = chipfire::firing::apply_sequence(&g, &from, &seq).unwrap();
    assert_eq!(to.to_string(), value["to"].as_str().unwrap());
}

#[test]
fn json_outputs_parse() {
    let check = run(&["check", &p3(), "1,0,1", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&check)).unwrap();
    assert_eq!(value["self_reachable"], true);

    let count = run(&["count", "40", "7", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&count)).unwrap();
    assert!(value["count"].as_str().unwrap().parse::<u128>().is_ok());

    let reach = run(&["reach", &p2(), "2,0", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&reach)).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 3);

    let table = run(&["oeis-table", "3", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&table)).unwrap();
    assert_eq!(value["depth"], 3);
}

#[test]
fn seeded_outputs_are_reproducible() {
    let a = run(&["gen-tree", "12", "--seed", "42"]);
    let b = run(&["gen-tree", "12", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("n 12\n"));

    let args = ["verify", "--max-n", "3", "--max-chips", "3", "--cases", "40", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with("all checks passed\n"));
}

#[test]
fn generated_trees_parse_back() {
    let out = run(&["gen-tree", "7", "--seed", "3"]);
    use std::str::FromStr;
    let g = chipfire::graph::Graph::from_str(&stdout(&out)).unwrap();
    assert!(chipfire::graph::Tree::new(g).is_ok());
}
