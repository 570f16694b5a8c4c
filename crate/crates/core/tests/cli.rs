use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qudit-ame"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn quiet_success(out: &Output) -> String {
    assert!(out.status.success(), "status {:?}, stderr {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert!(out.stderr.is_empty(), "stderr on success: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn construct_then_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bell = dir.path().join("bell.gens");
    let out = run(&["construct", "bell", "--dim", "5", "--parties", "2", "--out", bell.to_str().unwrap()]);
    assert!(quiet_success(&out).is_empty());
    let out = run(&["verify", bell.to_str().unwrap(), "--method", "both"]);
    assert!(quiet_success(&out).contains("ame=yes"));

    let zero = write(dir.path(), "zero.gens", "2 2 2\n0 | 0 0 | 1 0\n0 | 0 0 | 0 1\n");
    let out = run(&["verify", &zero]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ame=no"));

    let bad = write(dir.path(), "bad.gens", "2 2 2\n0 | 1 0 | 0 0\n0 | 0 0 | 1 0\n");
    let out = run(&["verify", &bad]);
    assert_eq!(out.status.code(), Some(2));

    let garbage = write(dir.path(), "garbage.gens", "2 2\n");
    let out = run(&["verify", &garbage]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn search_witness_feeds_graph_construction() {
    let out = run(&["search", "--parties", "4", "--dim", "3", "--first"]);
    let text = quiet_success(&out);
    let witness = text.lines().next().unwrap();
    assert!(witness.starts_with("4 3 :"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("g.gens");
    let out = run(&[
        "construct",
        "graph",
        "--dim",
        "3",
        "--parties",
        "4",
        "--adjacency",
        witness,
        "--out",
        gens.to_str().unwrap(),
    ]);
    quiet_success(&out);
    let out = run(&["verify", gens.to_str().unwrap(), "--method", "both"]);
    assert!(quiet_success(&out).contains("ame=yes"));
}

#[test]
fn search_certificates_and_shards() {
    let out = run(&["search", "--parties", "4", "--dim", "2"]);
    assert_eq!(quiet_success(&out), "EXHAUSTED n=4 d=2 searched=64 witnesses=0\n# no stabilizer AME(4,2) state\n");

    let a = quiet_success(&run(&["search", "--parties", "4", "--dim", "3", "--shard", "0:400"]));
    let b = quiet_success(&run(&["search", "--parties", "4", "--dim", "3", "--shard", "400:729"]));
    let full = quiet_success(&run(&["search", "--parties", "4", "--dim", "3"]));
    let witnesses = |s: &str| s.lines().filter(|l| l.contains(" : ")).map(str::to_string).collect::<Vec<_>>();
    let mut joined = witnesses(&a);
    joined.extend(witnesses(&b));
    assert_eq!(joined, witnesses(&full));
    assert!(a.contains("PARTIAL n=4 d=3 range=0:400"));

    let out = run(&["search", "--parties", "6", "--dim", "6", "--search-budget", "1000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_ghz6() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("ghz.gens");
    quiet_success(&run(&["construct", "ghz", "--dim", "6", "--parties", "3", "--out", gens.to_str().unwrap()]));
    let report = quiet_success(&run(&["decompose", gens.to_str().unwrap(), "--verify"]));
    assert!(report.starts_with("factorization D=6 = 2^1 * 3^1\n"));
    assert!(report.contains("# dense check: passed"));
    assert!(report.contains("factor q=2 ame=yes"));
    assert!(report.contains("factor q=3 ame=yes"));
}

#[test]
fn nogo_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "svg", "csv-reasons"] {
        let a = quiet_success(&run(&["nogo", "--format", format]));
        let b = quiet_success(&run(&["nogo", "--format", format]));
        assert_eq!(a, b, "{format}");
    }
    let svg = dir.path().join("t.svg");
    quiet_success(&run(&["nogo", "--format", "svg", "--out", svg.to_str().unwrap()]));
    let text = std::fs::read_to_string(&svg).unwrap();
    roxmltree::Document::parse(&text).unwrap();

    let facts = write(dir.path(), "facts.txt", "2 2 noAME bogus\n2 2 stabAMEExists bell\n");
    let out = run(&["nogo", "--facts", &facts]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("conflicting facts"));
    assert!(out.stdout.is_empty());
}

#[test]
fn rejects_bad_configuration() {
    assert_eq!(run(&["search", "--parties", "3", "--dim", "2", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "bell", "--dim", "1"]).status.code(), Some(2));
    assert!(!run(&["construct", "torus", "--dim", "3"]).status.success());
}
