//! End-to-end checks of the binary: formats on disk, exit codes, and the
//! determinism contract of the report.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_starkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn starkit")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_writes_the_documented_edgelist() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s42.el");
    let out = run(&[
        "gen", "--family", "nkstar", "--n", "4", "--k", "2", "--format", "edgelist", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "nv=12 ne=18\n");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# family=nkstar n=4 k=2 nv=12 ne=18\n"));
    assert_eq!(text.lines().count(), 19);
}

#[test]
fn gen_writes_dimacs_with_labels_companion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s42.dimacs");
    let out = run(&[
        "gen", "--family", "nkstar", "--n", "4", "--k", "2", "--format", "dimacs", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p edge 12 18\n"));
    let labels_path = format!("{}.labels.json", path.display());
    assert!(Path::new(&labels_path).exists());

    // round trip through the exact oracle: parsing must reproduce the graph
    let exact = run(&[
        "exact", "--graph", path.to_str().unwrap(), "--h", "2", "--measure", "kappa",
    ]);
    assert!(exact.status.success());
    assert!(stdout_of(&exact).contains("\"value\":3"));
}

#[test]
fn gen_star_n2_is_one_edge() {
    let out = run(&["gen", "--family", "star", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "# family=star n=2 k=2 nv=2 ne=1\n1.2 2.1\n");
}

#[test]
fn gen_an_n5_has_sixty_vertices() {
    let out = run(&["gen", "--family", "an", "--n", "5"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nv=60"));
}

#[test]
fn formula_prints_value_and_branch() {
    let out = run(&[
        "formula", "--family", "nkstar", "--n", "4", "--k", "2", "--h", "2", "--measure", "kappa",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "3 (high)\n");

    let out = run(&["formula", "--family", "star", "--n", "4", "--h", "2"]);
    assert_eq!(stdout_of(&out), "6 (star)\n");

    let out = run(&["formula", "--family", "an", "--n", "5", "--h", "3"]);
    assert_eq!(stdout_of(&out), "12 (an_high)\n");
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(run(&["gen", "--family", "bogus", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--family", "nkstar", "--n", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["formula", "--family", "nkstar", "--n", "4", "--k", "1", "--h", "0", "--measure", "kappa"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["formula", "--family", "an", "--n", "5", "--h", "1"]).status.code(),
        Some(2),
        "the low measures differ, so an h<2 needs --measure"
    );
}

#[test]
fn io_errors_exit_3() {
    let out = run(&["exact", "--graph", "/nonexistent/g.el", "--h", "0", "--measure", "kappa"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cut_verify_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("s42.el");
    let cert = dir.path().join("cert.json");
    assert!(run(&[
        "gen", "--family", "nkstar", "--n", "4", "--k", "2", "--out",
        graph.to_str().unwrap(),
    ])
    .status
    .success());
    assert!(run(&[
        "cut", "--n", "4", "--k", "2", "--h", "2", "--kind", "vertex", "--out",
        cert.to_str().unwrap(),
    ])
    .status
    .success());

    let verify = run(&["verify", "--graph", graph.to_str().unwrap(), "--cert", cert.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_of(&verify), "valid kind=vertex size=3\n");

    // drop one cut vertex: deleting the remaining two leaves the graph
    // connected
    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered_text = text
        .replace("[\"1.2\",\"1.3\",\"1.4\"]", "[\"1.2\",\"1.3\"]")
        .replace("\"size\":3", "\"size\":2");
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, tampered_text).unwrap();
    let verify = run(&[
        "verify", "--graph", graph.to_str().unwrap(), "--cert", tampered.to_str().unwrap(),
    ]);
    assert_eq!(verify.status.code(), Some(1));
    assert!(stdout_of(&verify).contains("invalid"));
    assert!(stdout_of(&verify).contains("connected"));

    // empty cut: trivially not a cut of a connected graph
    let empty_text = text
        .replace("[\"1.2\",\"1.3\",\"1.4\"]", "[]")
        .replace("\"size\":3", "\"size\":0");
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, empty_text).unwrap();
    let verify = run(&["verify", "--graph", graph.to_str().unwrap(), "--cert", empty.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));

    // edge certificates verify too
    let ecert = dir.path().join("ecert.json");
    assert!(run(&[
        "cut", "--n", "4", "--k", "2", "--h", "2", "--kind", "edge", "--out",
        ecert.to_str().unwrap(),
    ])
    .status
    .success());
    let verify = run(&["verify", "--graph", graph.to_str().unwrap(), "--cert", ecert.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn exact_reports_seeded_runs_and_bad_measures() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("s42.el");
    let cert = dir.path().join("cert.json");
    run(&["gen", "--family", "nkstar", "--n", "4", "--k", "2", "--out", graph.to_str().unwrap()]);
    run(&["cut", "--n", "4", "--k", "2", "--h", "2", "--kind", "edge", "--out", cert.to_str().unwrap()]);

    let out = run(&[
        "exact", "--graph", graph.to_str().unwrap(), "--h", "2", "--measure", "lambda",
        "--seed-cert", cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("\"measure\":\"lambda\""));
    assert!(text.contains("\"value\":3"));
    assert!(text.contains("\"exhaustive\":true"));
    assert!(text.ends_with('\n'));

    let out = run(&["exact", "--graph", graph.to_str().unwrap(), "--h", "2", "--measure", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn split_pipes_into_iso() {
    let dir = tempfile::tempdir().unwrap();
    let star = dir.path().join("s4.el");
    let split = dir.path().join("split.el");
    let map = dir.path().join("map.json");
    run(&["gen", "--family", "star", "--n", "4", "--out", star.to_str().unwrap()]);
    let out = run(&[
        "split", "--n", "4", "--k", "2", "--out", split.to_str().unwrap(), "--map-out",
        map.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let iso = run(&["iso", "--mode", "labels", split.to_str().unwrap(), star.to_str().unwrap()]);
    assert_eq!(iso.status.code(), Some(0));
    assert_eq!(stdout_of(&iso), "equal\n");

    let map_text = std::fs::read_to_string(&map).unwrap();
    assert!(map_text.starts_with("{\"t\":2,\"rule\":\"suffix\",\"blocks\":{"));
    assert!(map_text.contains("\"2.1\":[\"2.1.3.4\",\"2.1.4.3\"]"));

    // generic splits need --t; suffix splits reject it
    assert_eq!(
        run(&["split", "--graph", star.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["split", "--n", "4", "--k", "2", "--t", "3"]).status.code(), Some(2));
}

#[test]
fn iso_search_finds_alternating_witness() {
    let dir = tempfile::tempdir().unwrap();
    let an4 = dir.path().join("an4.el");
    let s42 = dir.path().join("s42.el");
    run(&["gen", "--family", "an", "--n", "4", "--out", an4.to_str().unwrap()]);
    run(&["gen", "--family", "nkstar", "--n", "4", "--k", "2", "--out", s42.to_str().unwrap()]);

    let out = run(&["iso", "--mode", "search", an4.to_str().unwrap(), s42.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("{\"mapping\":{"));
    assert!(text.trim_end().ends_with("\"verified\":true}"));

    // different vertex counts: not equal, exit 1
    let star5 = dir.path().join("s5.el");
    run(&["gen", "--family", "star", "--n", "5", "--out", star5.to_str().unwrap()]);
    let out = run(&["iso", "--mode", "labels", an4.to_str().unwrap(), star5.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "not equal\n");
}

#[test]
fn report_is_deterministic_apart_from_runtimes() {
    let run_report = || {
        let out = bin()
            .args(["report", "--n-max", "4"])
            .env("STARKIT_THREADS", "2")
            .output()
            .expect("spawn starkit");
        assert!(out.status.success());
        stdout_of(&out)
    };
    let a = run_report();
    let b = run_report();
    let strip = |text: &str| -> Vec<String> {
        text.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap())
            .collect()
    };
    assert_eq!(strip(&a), strip(&b), "report rows differ beyond runtime_ms");
    assert!(a.starts_with("family,n,k,h,measure,formula,exact,witness_size,agree,runtime_ms\n"));
    assert!(a.contains("nkstar,4,2,2,kappa,3,3,3,true,"));
    assert!(a.contains("nkstar,4,3,1,lambda,4,4,4,true,"));
    assert_eq!(a.lines().count(), 9, "header plus eight rows");
}

#[test]
fn threads_env_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("s42.el");
    run(&["gen", "--family", "nkstar", "--n", "4", "--k", "2", "--out", graph.to_str().unwrap()]);
    let out = bin()
        .args(["exact", "--graph", graph.to_str().unwrap(), "--h", "0", "--measure", "kappa"])
        .env("STARKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
