use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cumact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cumact")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_star_with_adg() {
    let star = fixture("star.txt");
    let o = cumact(&["solve", "im-ca", "--graph", &star, "--tau", "1", "--k", "2", "--strategy", "adg", "--theta", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("step\t1\ta\t3\t3\ttie_break=12\n"), "{out}");
    assert!(out.contains("seeds=a,b\test_active=4"));
    assert!(out.contains("rho_eval=4"));
    // the resolved configuration goes to stderr
    assert!(String::from_utf8_lossy(&o.stderr).contains("# strategy=adg theta=4"));
}

#[test]
fn exit_codes() {
    let fan = fixture("fan_in3.txt");
    let dir = tempfile::tempdir().unwrap();
    let only_a = dir.path().join("a.txt");
    let only_u = dir.path().join("u.txt");
    std::fs::write(&only_a, "a\n").unwrap();
    std::fs::write(&only_u, "u\n").unwrap();
    let (a, u) = (only_a.to_str().unwrap(), only_u.to_str().unwrap());

    let infeasible =
        cumact(&["solve", "sm-ca", "--graph", &fan, "--tau", "1", "--candidates", a, "--target-file", u, "--theta", "50"]);
    assert_eq!(infeasible.status.code(), Some(3));

    let bad_tau = cumact(&["solve", "im-ca", "--graph", &fan, "--tau", "1.5", "--k", "1"]);
    assert_eq!(bad_tau.status.code(), Some(2));

    let missing = cumact(&["solve", "im-ca", "--graph", "/no/such/file", "--k", "1"]);
    assert_eq!(missing.status.code(), Some(1));

    let feasible = cumact(&["solve", "sm-ca", "--graph", &fan, "--tau", "1", "--target-file", u, "--theta", "50"]);
    assert_eq!(feasible.status.code(), Some(0));
    assert!(stdout(&feasible).contains("seeds=u\t"));
}

#[test]
fn saved_index_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let o = cumact(&["gen-graph", "--nodes", "300", "--degree", "4", "--model", "weighted-cascade", "--seed", "2", "--out", graph.to_str().unwrap()]);
    assert!(o.status.success());
    let snap: PathBuf = dir.path().join("index.bin");
    let g = graph.to_str().unwrap();
    let base = ["solve", "im-ca", "--graph", g, "--k", "5", "--theta", "50", "--tau", "0.3", "--runs", "200"];
    let first = cumact(&[&base[..], &["--save-index", snap.to_str().unwrap()]].concat());
    let second = cumact(&[&base[..], &["--load-index", snap.to_str().unwrap()]].concat());
    assert!(first.status.success() && second.status.success());
    let records = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("timing")).map(String::from).collect::<Vec<_>>();
    assert_eq!(records(&first), records(&second));
}

#[test]
fn baselines_and_eval() {
    let fan = fixture("fan_in3.txt");
    let degree = cumact(&["baseline", "degree", "--graph", &fan]);
    assert_eq!(stdout(&degree).lines().last(), Some("4 u 0"));
    let coverage = cumact(&["baseline", "coverage", "--graph", &fan, "--k", "1", "--tau", "0.5", "--theta", "20"]);
    assert!(coverage.status.success());
    assert_eq!(stdout(&coverage).lines().count(), 1);

    let star = fixture("star.txt");
    let eval = cumact(&["eval", "--graph", &star, "--tau", "1", "--seeds", "a,b", "--runs", "10"]);
    assert!(stdout(&eval).starts_with("rho_eval=4\t"));
    let unknown = cumact(&["eval", "--graph", &star, "--seeds", "zz"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn gen_probs_writes_weighted_edges() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.txt");
    std::fs::write(&plain, "a b\nb c\nc a\n").unwrap();
    let o = cumact(&["gen-probs", "--graph", plain.to_str().unwrap(), "--model", "constant:0.25"]);
    assert_eq!(stdout(&o), "a b 0.25\nb c 0.25\nc a 0.25\n");
    let unweighted = cumact(&["solve", "im-ca", "--graph", plain.to_str().unwrap(), "--k", "1"]);
    assert_eq!(unweighted.status.code(), Some(2));
}

#[test]
fn sweep_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("star.txt"), dir.path().join("star.txt")).unwrap();
    let config = dir.path().join("sweep.cfg");
    std::fs::write(&config, "graph = star.txt\ntau = 1\nbudgets = 1,2\ntheta = 8\neval_runs = 20\nalgorithms = adg\n").unwrap();
    let o = cumact(&["sweep", config.to_str().unwrap(), "--set", "algorithms=adg,degree"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().any(|l| l.starts_with("adg,1,,2,a;b,2,4,")));
    let empty = cumact(&["sweep", config.to_str().unwrap(), "--set", "algorithms="]);
    assert_eq!(empty.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&empty.stderr).contains("nothing to run"));
}
