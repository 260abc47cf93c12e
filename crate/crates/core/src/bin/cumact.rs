//! Command-line driver. Exit codes: 0 success, 1 I/O failure, 2 invalid
//! input or parameters, 3 infeasible seed minimization.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cumact::baselines::{self, Ranking};
use cumact::experiment::{self, evaluate_seeds, load_graph, parse_model, ExperimentConfig, DEFAULT_EVAL_RUNS};
use cumact::graph::{assign_probabilities, Graph, NodeId, TargetSet, Thresholds};
use cumact::problem::{ProblemSpec, Strategy, DEFAULT_C_IM, DEFAULT_C_SM, DEFAULT_THETA};
use cumact::rrset::RRIndex;
use cumact::solvers::{self, FullCoverageOptions, RunReport, SurrogateEstimator};
use cumact::{synthetic, Error, Result};

#[derive(Parser)]
#[command(name = "cumact", version, about = "Seed selection under cumulative activation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assign arc probabilities from a model and write the weighted edge list.
    GenProbs {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random directed graph with model probabilities.
    GenGraph {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 6.0)]
        degree: f64,
        #[arg(long, default_value = "trivalency")]
        model: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a solver and print its step and summary records.
    Solve {
        problem: ProblemArg,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Seed budget for im-ca.
        #[arg(long)]
        k: Option<usize>,
        /// Required active targets for sm-ca (default: every target).
        #[arg(long)]
        eta: Option<usize>,
        /// Estimator for full-coverage: exact, rr or mc:<runs>.
        #[arg(long, default_value = "rr")]
        estimator: String,
        /// Stopping slack for full-coverage.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        save_index: Option<PathBuf>,
        #[arg(long)]
        load_index: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a baseline ranking as `rank node score` lines.
    Baseline {
        name: BaselineArg,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Only the first k entries (required for coverage).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo evaluation of a seed set.
    Eval {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated seed labels.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_EVAL_RUNS)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        eval_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep from a `key = value` config and write CSV.
    Sweep {
        config: PathBuf,
        /// Override a config entry, e.g. `--set tau=0.3,0.7`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list: `u v` or `u v p` per line.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    undirected: bool,
    /// file, constant:<p>, weighted-cascade or trivalency.
    #[arg(long, default_value = "file")]
    model: String,
    #[arg(long, default_value_t = 0)]
    model_seed: u64,
}

#[derive(Args)]
struct InstanceArgs {
    /// Uniform threshold for every node.
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// `node tau` lines; nodes not listed take --tau.
    #[arg(long)]
    thresholds: Option<PathBuf>,
    /// One target label per line (default: every node).
    #[arg(long)]
    target_file: Option<PathBuf>,
    /// One label per line of the nodes allowed as seeds.
    #[arg(long)]
    candidates: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// adg, btg or btg:<c>.
    #[arg(long, default_value = "btg")]
    strategy: String,
    /// Balance parameter for btg (default 1.7 for im-ca, 1 for sm-ca).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluation cascades for the produced seed set; 0 skips evaluation.
    #[arg(long, default_value_t = DEFAULT_EVAL_RUNS)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    eval_seed: u64,
    /// Byte budget for the RR index.
    #[arg(long)]
    memory_cap: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    ImCa,
    SmCa,
    FullCoverage,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineArg {
    Coverage,
    Degree,
    Pagerank,
    Random,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible { .. } => 3,
                Error::Io(_) => 1,
                _ => 2,
            })
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        eprintln!(
            "# graph={} directed={} model={} model_seed={}",
            self.graph.display(),
            !self.undirected,
            self.model,
            self.model_seed
        );
        load_graph(&self.graph, !self.undirected, parse_model(&self.model)?.as_ref(), self.model_seed)
    }
}

struct Instance {
    target: TargetSet,
    thresholds: Thresholds,
    candidates: Option<Vec<NodeId>>,
}

impl InstanceArgs {
    fn load(&self, graph: &Graph) -> Result<Instance> {
        let n = graph.node_count();
        let thresholds = match &self.thresholds {
            Some(p) => Thresholds::load(open(p)?, graph, Some(self.tau))?,
            None => Thresholds::uniform(n, self.tau)?,
        };
        let target = match &self.target_file {
            Some(p) => TargetSet::load(open(p)?, graph)?,
            None => TargetSet::all(n),
        };
        let candidates = match &self.candidates {
            Some(p) => Some(TargetSet::load(open(p)?, graph)?.members().to_vec()),
            None => None,
        };
        eprintln!(
            "# tau={} thresholds={} targets={} candidates={}",
            self.tau,
            self.thresholds.as_ref().map_or("-".to_string(), |p| p.display().to_string()),
            target.len(),
            candidates.as_ref().map_or("all".to_string(), |c| c.len().to_string())
        );
        Ok(Instance { target, thresholds, candidates })
    }
}

impl SolverArgs {
    fn strategy(&self, default_c: f64) -> Result<Strategy> {
        Ok(match (self.strategy.parse()?, self.c) {
            (Strategy::BalancedTruncation { .. }, Some(c)) => Strategy::BalancedTruncation { c },
            (Strategy::BalancedTruncation { .. }, None) if self.strategy == "btg" => {
                Strategy::BalancedTruncation { c: default_c }
            }
            (s, _) => s,
        })
    }

    fn log(&self, strategy: Strategy) {
        eprintln!(
            "# strategy={strategy} theta={} seed={} runs={} eval_seed={}",
            self.theta, self.seed, self.runs, self.eval_seed
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenProbs { graph, out } => {
            let g = graph.load()?;
            g.write_edge_list(output(out.as_deref())?)
        }
        Command::GenGraph { nodes, degree, model, seed, out } => {
            eprintln!("# nodes={nodes} degree={degree} model={model} seed={seed}");
            let g = synthetic::random_directed(nodes, degree, seed)?;
            let g = match parse_model(&model)? {
                Some(m) => assign_probabilities(&g, &m, seed)?,
                None => g,
            };
            g.write_edge_list(output(out.as_deref())?)
        }
        Command::Solve {
            problem,
            graph,
            instance,
            solver,
            k,
            eta,
            estimator,
            epsilon,
            save_index,
            load_index,
            out,
        } => {
            let g = graph.load()?;
            let inst = instance.load(&g)?;
            let u = inst.target.len();
            let (spec, default_c) = match problem {
                ProblemArg::ImCa => {
                    let k = k.ok_or_else(|| Error::InvalidParameter("im-ca needs --k".to_string()))?;
                    (ProblemSpec::im_ca(k, inst.target.clone(), inst.thresholds.clone()), DEFAULT_C_IM)
                }
                ProblemArg::SmCa => {
                    (ProblemSpec::sm_ca(eta.unwrap_or(u), inst.target.clone(), inst.thresholds.clone()), DEFAULT_C_SM)
                }
                ProblemArg::FullCoverage => (ProblemSpec::sm_ca(u, inst.target.clone(), inst.thresholds.clone()), DEFAULT_C_SM),
            };
            let strategy = solver.strategy(default_c)?;
            solver.log(strategy);
            let mut spec = spec.with_strategy(strategy).with_theta(solver.theta).with_seed(solver.seed);
            spec.candidates = inst.candidates.clone();
            spec.memory_cap = solver.memory_cap;
            spec.validate(&g)?;

            let mut report = match problem {
                ProblemArg::FullCoverage => {
                    let estimator = match estimator.as_str() {
                        "exact" => SurrogateEstimator::Exact,
                        "rr" => SurrogateEstimator::RrIndex { theta: solver.theta },
                        other => match other.strip_prefix("mc:").and_then(|r| r.parse().ok()) {
                            Some(runs) => SurrogateEstimator::MonteCarlo { runs },
                            None => return Err(Error::InvalidParameter(format!("unknown estimator '{other}'"))),
                        },
                    };
                    eprintln!("# estimator={estimator:?} epsilon={epsilon}");
                    solvers::solve_full_coverage(&g, &spec, &FullCoverageOptions { epsilon, estimator, lazy: true })?
                }
                _ => {
                    let start = std::time::Instant::now();
                    let index = match &load_index {
                        Some(p) => RRIndex::read_snapshot(open(p)?)?,
                        None => solvers::build_spec_index(&g, &spec)?,
                    };
                    let built = start.elapsed();
                    if let Some(p) = &save_index {
                        let mut w = BufWriter::new(File::create(p)?);
                        index.write_snapshot(&mut w)?;
                        w.flush()?;
                    }
                    let mut report = match problem {
                        ProblemArg::ImCa => solvers::solve_im_ca_with_index(index, &spec)?,
                        _ => solvers::solve_sm_ca_with_index(index, &spec)?,
                    };
                    report.timings.insert(0, solvers::PhaseTiming { phase: "index", elapsed: built });
                    report
                }
            };
            evaluate_report(&g, &inst, &solver, &mut report)?;
            let mut w = output(out.as_deref())?;
            report.write_records(&g, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::Baseline { name, graph, instance, solver, k, out } => {
            let g = graph.load()?;
            let ranking = match name {
                BaselineArg::Coverage => {
                    let inst = instance.load(&g)?;
                    let k = k.ok_or_else(|| Error::InvalidParameter("coverage needs --k".to_string()))?;
                    solver.log(Strategy::BalancedTruncation { c: 1.0 });
                    let index =
                        RRIndex::build(&g, &inst.target, &inst.thresholds, solver.theta, solver.seed, solver.memory_cap)?;
                    Ranking { order: baselines::coverage_greedy(&index, k)?, scores: None }
                }
                BaselineArg::Degree => baselines::rank_by_degree(&g),
                BaselineArg::Pagerank => {
                    baselines::pagerank(&g, baselines::DEFAULT_RESTART, baselines::DEFAULT_TOLERANCE)?
                }
                BaselineArg::Random => baselines::random_ranking(&g, solver.seed),
            };
            let shown = Ranking {
                order: ranking.prefix(k.unwrap_or(usize::MAX)).to_vec(),
                scores: ranking.scores,
            };
            let mut w = output(out.as_deref())?;
            shown.write(&g, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::Eval { graph, instance, seeds, runs, eval_seed, out } => {
            let g = graph.load()?;
            let inst = instance.load(&g)?;
            let seeds = g.nodes(seeds.iter().map(String::as_str))?;
            eprintln!("# runs={runs} eval_seed={eval_seed}");
            let e = evaluate_seeds(&g, &inst.thresholds, &inst.target, &seeds, runs, eval_seed)?;
            let mut w = output(out.as_deref())?;
            writeln!(w, "rho_eval={}\truns={}\tnear_threshold={}", e.rho_hat, e.runs, e.near_threshold)?;
            for &u in inst.target.members() {
                let (p, tau) = (e.probs[u as usize], inst.thresholds.get(u));
                writeln!(w, "{}\t{p}\t{tau}\t{}", g.label(u), u8::from(p >= tau))?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Sweep { config, overrides, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            for o in &overrides {
                let (key, value) = o
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidParameter(format!("override '{o}' is not KEY=VALUE")))?;
                cfg.set(key.trim(), value.trim())?;
            }
            if out.is_some() {
                cfg.out = out;
            }
            eprint!("{}", cfg.to_string().lines().map(|l| format!("# {l}\n")).collect::<String>());
            let table = experiment::run_experiment(&cfg)?;
            let mut w = output(cfg.out.as_deref())?;
            table.write_csv(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn evaluate_report(graph: &Graph, inst: &Instance, solver: &SolverArgs, report: &mut RunReport) -> Result<()> {
    if solver.runs > 0 {
        let e = evaluate_seeds(graph, &inst.thresholds, &inst.target, &report.seeds, solver.runs, solver.eval_seed)?;
        report.evaluation = Some(e);
    }
    Ok(())
}
