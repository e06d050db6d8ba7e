use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bitruss::fixtures;

fn bitruss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitruss"))
        .args(args)
        .output()
        .expect("spawn bitruss")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn phi_column(tsv: &str) -> Vec<u64> {
    tsv.lines()
        .map(|l| l.split('\t').nth(2).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn nine_edge_example_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    fs::write(&input, fixtures::nine_edge_text()).unwrap();
    for alg in ["bs", "be", "be-batch", "pc"] {
        let out = dir.path().join(format!("{alg}.tsv"));
        let res = bitruss(&["--input", arg(&input), "--algorithm", alg, "--output", arg(&out), "--verify"]);
        assert!(res.status.success(), "{alg}: {}", String::from_utf8_lossy(&res.stderr));
        assert!(String::from_utf8_lossy(&res.stderr).contains("verify: PASS"));
        let tsv = fs::read_to_string(&out).unwrap();
        assert_eq!(tsv.lines().count(), 9);
        assert_eq!(phi_column(&tsv), vec![2, 2, 2, 2, 2, 2, 1, 1, 1]);
        assert!(tsv.starts_with("0\t0\t2\n0\t1\t2\n"));
    }
}

#[test]
fn stats_and_index_dump() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    let stats = dir.path().join("s.json");
    let dump = dir.path().join("idx.txt");
    fs::write(&input, fixtures::nine_edge_text()).unwrap();
    let res = bitruss(&[
        "--input", arg(&input), "--algorithm", "pc", "--stats", arg(&stats), "--dump-index", arg(&dump),
    ]);
    assert!(res.status.success());
    let tsv = String::from_utf8(res.stdout).unwrap();
    let record: serde_json::Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(record["algorithm"], "pc");
    assert_eq!(record["edges"], 9);
    assert_eq!(record["butterflies"], 4);
    assert_eq!(record["max_support"], 3);
    assert_eq!(record["max_phi"].as_u64(), phi_column(&tsv).into_iter().max());
    assert!(record["phase_count_ms"].is_number());
    assert_eq!(
        fs::read_to_string(&dump).unwrap(),
        "B0 k=3 edges=0,1,2,3,4,5\nB1 k=2 edges=5,6,7,8\n"
    );
}

#[test]
fn empty_input_is_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "% nothing here\n").unwrap();
    for alg in ["bs", "be", "be-batch", "pc"] {
        let res = bitruss(&["--input", arg(&input), "--algorithm", alg]);
        assert!(res.status.success(), "{alg}");
        assert!(res.stdout.is_empty());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    let pairs = bitruss::synthetic::random_bipartite(30, 40, 0.2, 5);
    let mut text = Vec::new();
    bitruss::synthetic::write_edge_list(&mut text, &pairs).unwrap();
    fs::write(&input, text).unwrap();
    for alg in ["be-batch", "pc"] {
        let a = bitruss(&["--input", arg(&input), "--algorithm", alg]);
        let b = bitruss(&["--input", arg(&input), "--algorithm", alg]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), pairs.len());
    }
}

#[test]
fn bad_input_and_flags_fail() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "1 2\n3\n").unwrap();
    let res = bitruss(&["--input", arg(&input)]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    assert!(!bitruss(&["--input", "/nonexistent/graph.txt"]).status.success());
    assert!(!bitruss(&["--input", arg(&input), "--algorithm", "nope"]).status.success());
    fs::write(&input, "1 2\n").unwrap();
    assert!(!bitruss(&["--input", arg(&input), "--tau", "0"]).status.success());
    assert!(!bitruss(&["--input", arg(&input), "--tau", "1.5"]).status.success());
}

#[test]
fn oracle_refusal_only_fatal_when_strict() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    fs::write(&input, fixtures::nine_edge_text()).unwrap();
    let lax = bitruss(&["--input", arg(&input), "--verify", "--oracle-limit", "4"]);
    assert!(lax.status.success());
    assert!(String::from_utf8_lossy(&lax.stderr).contains("skipped"));
    let strict = bitruss(&["--input", arg(&input), "--verify-strict", "--oracle-limit", "4"]);
    assert!(!strict.status.success());
}

#[test]
fn generators() {
    let res = bitruss(&["--gen", "bloom", "--k", "1001"]);
    assert!(res.status.success());
    assert_eq!(String::from_utf8(res.stdout).unwrap().lines().count(), 2002);

    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("hub.txt");
    let res = bitruss(&["--gen", "skewed-hub", "--output", arg(&graph)]);
    assert!(res.status.success());
    let g = bitruss::load_edge_list(fs::read(&graph).unwrap().as_slice()).unwrap();
    assert_eq!(g.vertex_count(), 4002);

    let res = bitruss(&["--input", arg(&graph), "--algorithm", "be"]);
    let tsv = String::from_utf8(res.stdout).unwrap();
    let hub = tsv.lines().find(|l| l.starts_with("1\t1\t")).unwrap();
    assert_eq!(hub, "1\t1\t1");

    assert!(!bitruss(&["--gen", "bloom", "--k", "0"]).status.success());
    assert!(!bitruss(&["--gen", "skewed-hub", "--bloom", "1"]).status.success());
}
