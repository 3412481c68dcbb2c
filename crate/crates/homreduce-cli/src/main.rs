//! Command-line front end: exact solvers, reductions, pipeline verification,
//! gadget and instance generation, benchmarks.
//!
//! Exit codes on decision commands: 0 = yes, 1 = no, 2 = error or timeout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use homreduce::bench::{bench_si, to_csv};
use homreduce::gadgets::{build_a, build_d, build_d_prime, build_t, AnchoredGraph};
use homreduce::graph::SimpleGraph;
use homreduce::io::{read_graph, read_lists, write_graph, write_graph_with_comments, write_lists, write_witness};
use homreduce::partition::BalanceParams;
use homreduce::pipeline::{verify_pipeline, PipelineConfig, Verdict};
use homreduce::random::{random_graph, RandomSpec};
use homreduce::reductions::{
    col_to_listhom, col_to_listhom_with_color_count, hom_to_si_instances, listhom_to_hom,
    ColToListHom, FamilyDecision, ListHomInstance,
};
use homreduce::solver::{
    solve_hom, solve_kcol, solve_li_hom, solve_listhom, solve_si, SolveBudget, SolveOutcome,
};

#[derive(Parser)]
#[command(name = "homreduce", version, about = "Graph reduction toolkit and exact solver suite")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an instance exactly.
    Solve {
        #[command(subcommand)]
        kind: SolveCmd,
    },
    /// Transform instances between problems.
    Reduce {
        #[command(subcommand)]
        kind: ReduceCmd,
    },
    /// Run every pipeline stage and cross-check the outcomes.
    Verify {
        #[command(subcommand)]
        kind: VerifyCmd,
    },
    /// Print a gadget graph with anchor annotations.
    Gadget {
        #[command(subcommand)]
        kind: GadgetCmd,
    },
    /// Generate a seeded random graph.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_deg: u32,
        #[arg(long)]
        seed: u64,
    },
    /// Benchmarks.
    Bench {
        #[command(subcommand)]
        kind: BenchCmd,
    },
}

#[derive(Args)]
struct SolveOpts {
    /// Search-node limit.
    #[arg(long, default_value_t = u64::MAX)]
    budget_nodes: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    budget_secs: Option<u64>,
    /// Write the witness of a yes answer to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

impl SolveOpts {
    fn budget(&self) -> SolveBudget {
        let time = Duration::from_secs(self.budget_secs.unwrap_or(u32::MAX as u64));
        SolveBudget::new(self.budget_nodes, time)
    }
}

#[derive(Subcommand)]
enum SolveCmd {
    /// Homomorphism from pattern to target.
    Hom {
        pattern: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// List homomorphism; lists constrain each pattern vertex.
    Listhom {
        pattern: PathBuf,
        target: PathBuf,
        lists: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Locally injective homomorphism.
    Lihom {
        pattern: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Subgraph isomorphism: is the pattern a subgraph of the host?
    Si {
        pattern: PathBuf,
        host: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// k-coloring.
    Kcol {
        graph: PathBuf,
        #[arg(short, long)]
        k: u32,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Args)]
struct GroupingOpts {
    /// Group size.
    #[arg(long, default_value_t = 1)]
    r: u64,
    /// Use desk-scale parameters instead of the strict constants.
    #[arg(long)]
    relaxed: bool,
    /// Explicit color count (requires --relaxed; defaults to the vertex count).
    #[arg(long)]
    colors: Option<u64>,
    /// Degree bound the parameters are instantiated for.
    #[arg(long, default_value_t = 4)]
    degree_bound: u32,
}

impl GroupingOpts {
    fn params(&self) -> BalanceParams {
        if self.relaxed {
            BalanceParams::relaxed(self.degree_bound)
        } else {
            BalanceParams::paper(self.degree_bound)
        }
    }

    fn reduce(&self, g: &SimpleGraph, trim: bool) -> Result<ColToListHom> {
        if self.colors.is_some() && !self.relaxed {
            bail!("--colors requires --relaxed");
        }
        let params = self.params();
        let red = if self.relaxed {
            let l = self.colors.unwrap_or(g.n() as u64).max(1);
            col_to_listhom_with_color_count(g, self.r, l, &params, trim)?
        } else {
            col_to_listhom(g, self.r, &params, trim)?
        };
        Ok(red)
    }
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// 3-coloring of a graph to a list-homomorphism instance.
    Col2listhom {
        graph: PathBuf,
        #[command(flatten)]
        grouping: GroupingOpts,
        /// Keep only target vertices that appear in some list.
        #[arg(long)]
        trim: bool,
        /// Output prefix; writes PREFIX.pattern.col, PREFIX.target.col, PREFIX.lists.
        #[arg(long)]
        out: PathBuf,
    },
    /// List-homomorphism instance to a plain homomorphism instance.
    Listhom2hom {
        pattern: PathBuf,
        target: PathBuf,
        lists: PathBuf,
        /// Output prefix; writes PREFIX.pattern.col and PREFIX.target.col.
        #[arg(long)]
        out: PathBuf,
    },
    /// Homomorphism instance to its family of subgraph-isomorphism instances.
    Hom2si {
        pattern: PathBuf,
        target: PathBuf,
        /// Write the host graph of this family member (0-based) and exit.
        #[arg(long)]
        index: Option<u128>,
        /// Output path for --index.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solve the whole family and report the OR of the answers.
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = u64::MAX)]
        budget_nodes: u64,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Solve 3-coloring directly and through both reductions; compare.
    Pipeline {
        graph: PathBuf,
        #[command(flatten)]
        grouping: GroupingOpts,
        #[arg(long, default_value_t = u64::MAX)]
        budget_nodes: u64,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// 5-cycle with an apex vertex.
    Dprime,
    /// One chain block: 5-cycle joined to a canonical clique.
    D {
        #[arg(long)]
        h: u32,
    },
    /// Chain of k+1 identified blocks.
    T {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        h: u32,
    },
    /// Matching with h edges.
    A {
        #[arg(long)]
        h: u32,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Subgraph-isomorphism scaling benchmark; prints CSV.
    Si {
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget_nodes: u64,
        /// Omit the wall-clock column so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

fn load_graph(path: &Path) -> Result<SimpleGraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    read_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_listhom(pattern: &Path, target: &Path, lists: &Path) -> Result<ListHomInstance> {
    let pattern = load_graph(pattern)?;
    let target = load_graph(target)?;
    let text = std::fs::read_to_string(lists)
        .with_context(|| format!("reading {}", lists.display()))?;
    let lists = read_lists(&text, pattern.n(), target.n())
        .with_context(|| format!("parsing {}", lists.display()))?;
    Ok(ListHomInstance::new(pattern, target, lists)?)
}

fn finish_solve(outcome: SolveOutcome, witness_path: Option<&Path>) -> Result<ExitCode> {
    match outcome {
        SolveOutcome::Yes(w) => {
            println!("yes");
            if let Some(path) = witness_path {
                std::fs::write(path, write_witness(&w))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ExitCode::from(0))
        }
        SolveOutcome::No => {
            println!("no");
            Ok(ExitCode::from(1))
        }
        SolveOutcome::Timeout(nodes) => {
            println!("timeout after {nodes} nodes");
            Ok(ExitCode::from(2))
        }
    }
}

fn anchor_comments(g: &AnchoredGraph) -> Vec<String> {
    let fmt = |vs: &[u32]| vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ");
    let mut out = Vec::new();
    if let Some(z) = g.anchors.apex {
        out.push(format!("anchor apex {}", z + 1));
    }
    for (i, clique) in g.anchors.cliques.iter().enumerate() {
        out.push(format!("anchor clique{} {}", i, fmt(clique)));
    }
    for (i, cycle) in g.anchors.cycles.iter().enumerate() {
        out.push(format!("anchor cycle{} {}", i, fmt(cycle)));
    }
    if !g.anchors.zs.is_empty() {
        out.push(format!("anchor z {}", fmt(&g.anchors.zs)));
    }
    if !g.anchors.a.is_empty() {
        out.push(format!("anchor a {}", fmt(&g.anchors.a)));
        out.push(format!("anchor b {}", fmt(&g.anchors.b)));
    }
    out
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve { kind } => {
            let (outcome, opts) = match kind {
                SolveCmd::Hom { pattern, target, opts } => {
                    let (g, h) = (load_graph(&pattern)?, load_graph(&target)?);
                    (solve_hom(&g, &h, opts.budget()), opts)
                }
                SolveCmd::Listhom { pattern, target, lists, opts } => {
                    let inst = load_listhom(&pattern, &target, &lists)?;
                    (solve_listhom(&inst, opts.budget()), opts)
                }
                SolveCmd::Lihom { pattern, target, opts } => {
                    let (g, h) = (load_graph(&pattern)?, load_graph(&target)?);
                    (solve_li_hom(&g, &h, opts.budget()), opts)
                }
                SolveCmd::Si { pattern, host, opts } => {
                    let (g, h) = (load_graph(&pattern)?, load_graph(&host)?);
                    (solve_si(&g, &h, opts.budget()), opts)
                }
                SolveCmd::Kcol { graph, k, opts } => {
                    let g = load_graph(&graph)?;
                    (solve_kcol(&g, k, opts.budget()), opts)
                }
            };
            finish_solve(outcome, opts.witness.as_deref())
        }
        Cmd::Reduce { kind } => match kind {
            ReduceCmd::Col2listhom { graph, grouping, trim, out } => {
                let g = load_graph(&graph)?;
                let red = grouping.reduce(&g, trim)?;
                let prefix = out.to_string_lossy();

                let mut pattern_comments = Vec::new();
                for b in 0..red.grouped.bucket_count() {
                    let members: Vec<String> =
                        red.grouped.bucket(b as u32).iter().map(|v| (v + 1).to_string()).collect();
                    pattern_comments.push(format!("bucket {} {}", b + 1, members.join(" ")));
                }
                write_file(
                    Path::new(&format!("{prefix}.pattern.col")),
                    &write_graph_with_comments(red.instance.pattern(), &pattern_comments),
                )?;

                let target_comments: Vec<String> = red
                    .target_codes
                    .iter()
                    .enumerate()
                    .map(|(i, code)| format!("vertex {} {}", i + 1, code))
                    .collect();
                write_file(
                    Path::new(&format!("{prefix}.target.col")),
                    &write_graph_with_comments(red.instance.target(), &target_comments),
                )?;
                write_file(Path::new(&format!("{prefix}.lists")), &write_lists(red.instance.lists()))?;
                println!(
                    "pattern: {} buckets, target: {} vertices, trim: {}",
                    red.instance.pattern().n(),
                    red.instance.target().n(),
                    trim
                );
                Ok(ExitCode::from(0))
            }
            ReduceCmd::Listhom2hom { pattern, target, lists, out } => {
                let inst = load_listhom(&pattern, &target, &lists)?;
                let red = listhom_to_hom(&inst)?;
                let prefix = out.to_string_lossy();
                write_file(Path::new(&format!("{prefix}.pattern.col")), &write_graph(&red.pattern))?;
                write_file(Path::new(&format!("{prefix}.target.col")), &write_graph(&red.target))?;
                println!("pattern: {} vertices, target: {} vertices", red.pattern.n(), red.target.n());
                Ok(ExitCode::from(0))
            }
            ReduceCmd::Hom2si { pattern, target, index, out, solve, budget_nodes, budget_secs } => {
                let (g, h) = (load_graph(&pattern)?, load_graph(&target)?);
                let family = hom_to_si_instances(&g, &h);
                println!("family size: {}", family.family_size());
                if let Some(i) = index {
                    let inst = family
                        .iter()
                        .nth(usize::try_from(i).context("index out of range")?)
                        .context("index beyond the family")?;
                    let text = write_graph_with_comments(
                        &inst.host,
                        &[format!(
                            "replication {}",
                            inst.replication.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                        )],
                    );
                    match out {
                        Some(path) => write_file(&path, &text)?,
                        None => print!("{text}"),
                    }
                }
                if solve {
                    let budget = SolveBudget::new(
                        budget_nodes,
                        Duration::from_secs(budget_secs.unwrap_or(u32::MAX as u64)),
                    );
                    return Ok(match family.decide(budget) {
                        FamilyDecision::Embeds { replication, .. } => {
                            println!(
                                "yes (replication {})",
                                replication.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                            );
                            ExitCode::from(0)
                        }
                        FamilyDecision::NoEmbedding => {
                            println!("no");
                            ExitCode::from(1)
                        }
                        FamilyDecision::Timeout => {
                            println!("timeout");
                            ExitCode::from(2)
                        }
                    });
                }
                Ok(ExitCode::from(0))
            }
        },
        Cmd::Verify { kind } => match kind {
            VerifyCmd::Pipeline { graph, grouping, budget_nodes, budget_secs } => {
                let g = load_graph(&graph)?;
                if grouping.colors.is_some() && !grouping.relaxed {
                    bail!("--colors requires --relaxed");
                }
                let color_count = grouping
                    .relaxed
                    .then(|| grouping.colors.unwrap_or(g.n() as u64).max(1));
                let config = PipelineConfig {
                    r: grouping.r,
                    color_count,
                    params: grouping.params(),
                    trim: true,
                    budget: SolveBudget::new(
                        budget_nodes,
                        Duration::from_secs(budget_secs.unwrap_or(u32::MAX as u64)),
                    ),
                };
                let report = verify_pipeline(&g, &config);
                print!("{report}");
                Ok(match report.verdict {
                    Verdict::Consistent(true) if report.witnesses_ok() => ExitCode::from(0),
                    Verdict::Consistent(false) if report.witnesses_ok() => ExitCode::from(1),
                    _ => ExitCode::from(2),
                })
            }
        },
        Cmd::Gadget { kind } => {
            let gadget = match kind {
                GadgetCmd::Dprime => build_d_prime(),
                GadgetCmd::D { h } => build_d(h),
                GadgetCmd::T { k, h } => build_t(k, h),
                GadgetCmd::A { h } => build_a(h),
            };
            print!("{}", write_graph_with_comments(&gadget.graph, &anchor_comments(&gadget)));
            Ok(ExitCode::from(0))
        }
        Cmd::Gen { n, max_deg, seed } => {
            let g = random_graph(&RandomSpec { n, max_deg, seed })?;
            print!("{}", write_graph(&g));
            Ok(ExitCode::from(0))
        }
        Cmd::Bench { kind } => match kind {
            BenchCmd::Si { sizes, seed, budget_nodes, no_timing } => {
                let rows = bench_si(&sizes, seed, SolveBudget::nodes(budget_nodes));
                print!("{}", to_csv(&rows, !no_timing));
                Ok(ExitCode::from(0))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
