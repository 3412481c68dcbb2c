//! End-to-end checks of the binary: file handling, witness output, reduce
//! subcommands, deterministic generation.

use std::path::PathBuf;
use std::process::{Command, Output};

use homreduce::graph::SimpleGraph;
use homreduce::io::{read_graph, write_graph};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homreduce"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("homreduce-cli-tests").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_is_deterministic_and_parsable() {
    let a = run(&["gen", "--n", "30", "--max-deg", "4", "--seed", "5"]);
    let b = run(&["gen", "--n", "30", "--max-deg", "4", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let g = read_graph(&stdout(&a)).unwrap();
    assert_eq!(g.n(), 30);
    assert!(g.max_degree() <= 4);
}

#[test]
fn gadget_output_carries_anchors() {
    let out = run(&["gadget", "t", "--k", "2", "--h", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("c anchor z "), "{text}");
    let g = read_graph(&text).unwrap();
    assert_eq!(g.n(), 3 * 9 - 2);

    let out = run(&["gadget", "dprime"]);
    let text = stdout(&out);
    assert!(text.contains("c anchor apex "), "{text}");
    assert_eq!(read_graph(&text).unwrap().m(), 10);
}

#[test]
fn solve_writes_checkable_witness() {
    let dir = tmpdir("witness");
    let c4 = dir.join("c4.col");
    let k2 = dir.join("k2.col");
    std::fs::write(&c4, write_graph(&SimpleGraph::cycle(4))).unwrap();
    std::fs::write(&k2, write_graph(&SimpleGraph::complete(2))).unwrap();
    let wpath = dir.join("w.txt");
    let out = run(&[
        "solve",
        "hom",
        c4.to_str().unwrap(),
        k2.to_str().unwrap(),
        "--witness",
        wpath.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let witness = std::fs::read_to_string(&wpath).unwrap();
    // Alternating images around the even cycle.
    let images: Vec<u32> = witness
        .lines()
        .map(|l| l.split_whitespace().nth(2).unwrap().parse::<u32>().unwrap() - 1)
        .collect();
    assert_eq!(images.len(), 4);
    for i in 0..4 {
        assert_ne!(images[i], images[(i + 1) % 4]);
    }
}

#[test]
fn reduce_col2listhom_emits_solvable_files() {
    let dir = tmpdir("col2listhom");
    let k3 = dir.join("k3.col");
    std::fs::write(&k3, write_graph(&SimpleGraph::complete(3))).unwrap();
    let prefix = dir.join("red");
    let out = run(&[
        "reduce",
        "col2listhom",
        k3.to_str().unwrap(),
        "--relaxed",
        "--colors",
        "3",
        "--trim",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let pattern = format!("{}.pattern.col", prefix.display());
    let target = format!("{}.target.col", prefix.display());
    let lists = format!("{}.lists", prefix.display());
    let target_text = std::fs::read_to_string(&target).unwrap();
    assert!(target_text.contains("c vertex 1 "), "encodings annotated: {target_text}");

    // K3 is 3-colorable, so the produced instance must be a yes.
    let solved = run(&["solve", "listhom", &pattern, &target, &lists]);
    assert_eq!(solved.status.code(), Some(0));
}

#[test]
fn reduce_listhom2hom_round_trips_through_files() {
    let dir = tmpdir("listhom2hom");
    let p = dir.join("p.col");
    let t = dir.join("t.col");
    let l = dir.join("l.lists");
    std::fs::write(&p, write_graph(&SimpleGraph::complete(2))).unwrap();
    std::fs::write(&t, write_graph(&SimpleGraph::complete(2))).unwrap();
    std::fs::write(&l, "l 1 1 2\nl 2 1 2\n").unwrap();
    let prefix = dir.join("hom");
    let out = run(&[
        "reduce",
        "listhom2hom",
        p.to_str().unwrap(),
        t.to_str().unwrap(),
        l.to_str().unwrap(),
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let gp = format!("{}.pattern.col", prefix.display());
    let gt = format!("{}.target.col", prefix.display());
    let solved = run(&["solve", "hom", &gp, &gt]);
    assert_eq!(solved.status.code(), Some(0), "produced instance should be satisfiable");
}

#[test]
fn reduce_hom2si_reports_family_and_solves() {
    let dir = tmpdir("hom2si");
    let k2 = dir.join("k2.col");
    std::fs::write(&k2, write_graph(&SimpleGraph::complete(2))).unwrap();
    let out = run(&["reduce", "hom2si", k2.to_str().unwrap(), k2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("family size: 3"));

    let solved = run(&["reduce", "hom2si", k2.to_str().unwrap(), k2.to_str().unwrap(), "--solve"]);
    assert_eq!(solved.status.code(), Some(0));

    let k3 = dir.join("k3.col");
    std::fs::write(&k3, write_graph(&SimpleGraph::complete(3))).unwrap();
    let unsat = run(&["reduce", "hom2si", k3.to_str().unwrap(), k2.to_str().unwrap(), "--solve"]);
    assert_eq!(unsat.status.code(), Some(1));
}

#[test]
fn verify_pipeline_exit_codes() {
    let dir = tmpdir("pipeline");
    let k3 = dir.join("k3.col");
    let k4 = dir.join("k4.col");
    std::fs::write(&k3, write_graph(&SimpleGraph::complete(3))).unwrap();
    std::fs::write(&k4, write_graph(&SimpleGraph::complete(4))).unwrap();
    let yes = run(&["verify", "pipeline", k3.to_str().unwrap(), "--relaxed", "--colors", "3"]);
    assert_eq!(yes.status.code(), Some(0), "{}", stdout(&yes));
    assert!(stdout(&yes).contains("verdict: consistent (yes)"));
    // Starved of budget, the slow stage reads inconclusive: exit 2.
    let starved = run(&[
        "verify",
        "pipeline",
        k4.to_str().unwrap(),
        "--relaxed",
        "--colors",
        "4",
        "--budget-nodes",
        "100",
    ]);
    assert_eq!(starved.status.code(), Some(2), "{}", stdout(&starved));
    assert!(stdout(&starved).contains("verdict: inconclusive"));
}

#[test]
fn bench_csv_is_deterministic_without_timing() {
    let args = ["bench", "si", "--sizes", "4,5", "--seed", "9", "--no-timing"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("n,instance,nodes,outcome\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 10);
}
