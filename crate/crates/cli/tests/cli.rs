//! End-to-end tests driving the `tvg` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn tvg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tvg"))
}

fn run(args: &[&str]) -> Output {
    tvg().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

const PLAN: &str = "source,target,start,end\nA,B,0,10\nB,C,5,20\nC,A,12,30\nA,C,2,6\n";

const DELAY_CYCLE: &str =
    "source,target,start,end,delay\nX,Y,0,100,1\nY,Z,0,100,1\nZ,X,0,100,1\n";

#[test]
fn curve_emits_non_decreasing_average() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_file(&dir, "plan.csv", PLAN);
    let out = stdout_of(&run(&["curve", "--k-max", "6", "--window", "0,30", &plan]));
    let mut prev = f64::MIN;
    let mut rows = 0;
    for line in out.lines().filter(|l| !l.starts_with('#')) {
        let mut cols = line.split_whitespace();
        let _k: usize = cols.next().unwrap().parse().unwrap();
        let avg: f64 = cols.next().unwrap().parse().unwrap();
        assert!(avg >= prev, "average decreased: {out}");
        prev = avg;
        rows += 1;
    }
    assert_eq!(rows, 7);
    assert!(out.starts_with("# tvg "));
}

#[test]
fn star_reports_non_convergence_for_delay_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_file(&dir, "cycle.csv", DELAY_CYCLE);
    let out = stdout_of(&run(&[
        "star",
        "--semiring",
        "delay",
        "--max-k",
        "50",
        &plan,
    ]));
    assert_eq!(out.trim(), "converged: none");
}

#[test]
fn star_semiring_assertion_mismatch_is_semantic_error() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_file(&dir, "plan.csv", PLAN);
    let out = run(&["star", "--semiring", "delay", &plan]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn gen_sphere_pipes_into_diameter() {
    let gen = run(&[
        "gen", "sphere", "--n", "60", "--theta", "1.0472", "--seed", "7",
    ]);
    let json = stdout_of(&gen);
    let mut child = tvg()
        .args(["diameter", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = stdout_of(&out);
    let diam: usize = text
        .trim()
        .strip_prefix("diameter: ")
        .expect("integer diameter report")
        .parse()
        .unwrap();
    assert!(diam >= 1);
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let mut captures = Vec::new();
    for _ in 0..2 {
        let st = tvg()
            .args([
                "gen",
                "random",
                "--n",
                "6",
                "--window",
                "0,100",
                "--seed",
                "42",
                "-o",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(st.success());
        captures.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(captures[0], captures[1]);
}

#[test]
fn env_seed_fallback_matches_flag() {
    let via_flag = stdout_of(
        &tvg()
            .args(["gen", "random", "--n", "4", "--window", "0,10", "--seed", "9"])
            .output()
            .unwrap(),
    );
    let via_env = stdout_of(
        &tvg()
            .args(["gen", "random", "--n", "4", "--window", "0,10"])
            .env("TVG_SEED", "9")
            .output()
            .unwrap(),
    );
    // headers echo the config (which differs), bodies must agree
    let body = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&via_flag), body(&via_env));
}

#[test]
fn dist_hausdorff_between_plans() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(&dir, "a.csv", PLAN);
    let b = write_file(
        &dir,
        "b.csv",
        "source,target,start,end\nA,B,0,10\nB,C,5,20\nC,A,12,30\nA,C,2,8\n",
    );
    let out = stdout_of(&run(&["dist", "--metric", "hausdorff", &a, &b]));
    assert_eq!(out.trim(), "distance: 2");
}

#[test]
fn zigzag_barcode_lines() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_file(&dir, "plan.csv", PLAN);
    let out = stdout_of(&run(&["zigzag", "--dim", "1", &plan]));
    let bars: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(bars, ["1 5 6 0 0 1"]);
}

#[test]
fn ping_reports_growing_arrivals() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_file(&dir, "cycle.csv", DELAY_CYCLE);
    let out = stdout_of(&run(&[
        "ping", "--source", "X", "--t0", "5", "--k-max", "4", &plan,
    ]));
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5);
    // k = 0: only the source has an arrival
    assert_eq!(rows[0], "0 5 inf inf");
    // k = 1: Y hears the ping one second later
    assert_eq!(rows[1], "1 5 6 inf");
    // k = 3: the echo returns to the source, and worst-case aggregation
    // reports the echoed arrival (the max delay dominates the sum)
    assert_eq!(rows[2], "2 5 6 7");
    assert_eq!(rows[3], "3 8 6 7");
    assert_eq!(rows[4], "4 8 9 7");
}

#[test]
fn corpus_and_knn_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_dir = dir.path().join("corpus");
    let st = tvg()
        .args([
            "gen",
            "corpus",
            "--per-class",
            "4",
            "--seed",
            "3",
            "--out-dir",
            corpus_dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let manifest = corpus_dir.join("manifest.json");
    let out = stdout_of(&run(&[
        "knn",
        manifest.to_str().unwrap(),
        "--dim",
        "1",
        "--p",
        "2",
        "--k-max",
        "3",
        "--splits",
        "5",
        "--train-frac",
        "0.75",
        "--seed",
        "1",
    ]));
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let acc: f64 = row.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&acc));
    }
}

#[test]
fn exit_codes_are_distinct() {
    // usage
    let out = run(&["definitely-not-a-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
    // parse: malformed contact plan
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(&dir, "bad.csv", "source,target,start,end\nA,B,9,3\n");
    let out = run(&["diameter", &bad]);
    assert_eq!(out.status.code(), Some(3));
    // parse: unreadable file
    let out = run(&["diameter", "/definitely/missing.csv"]);
    assert_eq!(out.status.code(), Some(3));
    // semantic: ping on a lifetime TVG
    let plan = write_file(&dir, "plan.csv", PLAN);
    let out = run(&["ping", "--source", "A", &plan]);
    assert_eq!(out.status.code(), Some(4));
    // resource limit: exact relabeling search beyond n = 9
    let mut rows = String::from("source,target,start,end\n");
    for i in 0..10 {
        rows.push_str(&format!("n{},n{},0,1\n", i, (i + 1) % 10));
    }
    let big = write_file(&dir, "big.csv", &rows);
    let out = run(&["dist", "--metric", "symhausdorff", &big, &big]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn cumulant_output_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let plan = write_file(&dir, "plan.csv", PLAN);
    let out_path = dir.path().join("c2.json");
    let st = tvg()
        .args(["cumulant", "-k", "2", &plan, "-o", out_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(st.success());
    // the emitted JSON (with header) parses back through any reader command
    let out = stdout_of(&run(&["diameter", out_path.to_str().unwrap()]));
    assert!(out.starts_with("diameter: "));
}
