//! Experiment harness: independent Monte-Carlo evaluation of seed sets and
//! parameter sweeps over thresholds, balance parameters and budgets that
//! end in one CSV table.
//!
//! Every algorithm at a given threshold setting shares one RR index, and
//! every seed set is scored by the same estimator on the `Evaluation`
//! random domain, which no solver touches.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{coverage_greedy_among, pagerank, random_ranking, rank_by_degree, DEFAULT_RESTART, DEFAULT_TOLERANCE};
use crate::cascade::activation_counts;
use crate::error::{Error, Result};
use crate::graph::{assign_probabilities, load_edge_list, Graph, NodeId, ProbModel, TargetSet, Thresholds};
use crate::problem::{ProblemSpec, Strategy, DEFAULT_C_IM, DEFAULT_C_SM, DEFAULT_THETA};
use crate::rng::{Domain, Substreams};
use crate::rrset::RRIndex;
use crate::solvers::{solve_im_ca_with_index, solve_sm_ca_with_index};

pub const DEFAULT_EVAL_RUNS: u64 = 10_000;

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 10] =
    ["algorithm", "tau", "c", "budget_or_eta", "seeds", "seed_count", "rho_eval", "runtime_ms", "status", "master_seed"];

/// Independent estimate of a seed set's performance.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Targets with `P_hat_u >= tau_u`.
    pub rho_hat: usize,
    /// `P_hat_u` for every node.
    pub probs: Vec<f64>,
    pub runs: u64,
    /// Targets whose estimate lies within three standard errors of their
    /// threshold, where the verdict is close to a coin flip.
    pub near_threshold: usize,
}

/// Scores `seeds` with `runs` fresh cascades drawn from the evaluation
/// domain of `eval_seed`.
pub fn evaluate_seeds(
    graph: &Graph,
    thresholds: &Thresholds,
    target: &TargetSet,
    seeds: &[NodeId],
    runs: u64,
    eval_seed: u64,
) -> Result<Evaluation> {
    let activation = activation_counts(graph, seeds, runs, &Substreams::new(eval_seed, Domain::Evaluation))?;
    let probs = activation.probabilities();
    let mut rho_hat = 0;
    let mut near_threshold = 0;
    for &u in target.members() {
        let (p, tau) = (probs[u as usize], thresholds.get(u));
        if p >= tau {
            rho_hat += 1;
        }
        if (p - tau).abs() < 3.0 * (tau * (1.0 - tau) / runs as f64).sqrt() {
            near_threshold += 1;
        }
    }
    Ok(Evaluation { rho_hat, probs, runs, near_threshold })
}

/// Loads an edge list and, unless `model` is `None`, replaces its
/// probabilities with draws from `model`.
pub fn load_graph(path: &Path, directed: bool, model: Option<&ProbModel>, model_seed: u64) -> Result<Graph> {
    let file = File::open(path).map_err(|e| io_context(e, path))?;
    let graph = load_edge_list(BufReader::new(file), directed)?;
    match model {
        Some(m) => assign_probabilities(&graph, m, model_seed),
        None if graph.is_weighted() => Ok(graph),
        None => Err(Error::InvalidParameter(format!(
            "{} has no arc probabilities; pick a probability model",
            path.display()
        ))),
    }
}

fn io_context(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// `file` (probabilities from the edge list), `constant:<p>`,
/// `weighted-cascade` or `trivalency`.
pub fn parse_model(s: &str) -> Result<Option<ProbModel>> {
    match s {
        "file" => Ok(None),
        "weighted-cascade" | "wc" => Ok(Some(ProbModel::WeightedCascade(None))),
        "trivalency" | "tv" => Ok(Some(ProbModel::Trivalency)),
        _ => match s.strip_prefix("constant:") {
            Some(p) => p
                .parse()
                .map(|p| Some(ProbModel::Constant(p)))
                .map_err(|_| Error::InvalidParameter(format!("bad constant probability in '{s}'"))),
            None => Err(Error::InvalidParameter(format!("unknown probability model '{s}'"))),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Btg,
    Adg,
    Coverage,
    Degree,
    PageRank,
    Random,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Btg => "btg",
            Algorithm::Adg => "adg",
            Algorithm::Coverage => "coverage",
            Algorithm::Degree => "degree",
            Algorithm::PageRank => "pagerank",
            Algorithm::Random => "random",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "btg" => Algorithm::Btg,
            "adg" => Algorithm::Adg,
            "coverage" => Algorithm::Coverage,
            "degree" => Algorithm::Degree,
            "pagerank" => Algorithm::PageRank,
            "random" => Algorithm::Random,
            _ => return Err(Error::InvalidParameter(format!("unknown algorithm '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemChoice {
    ImCa,
    SmCa,
}

impl fmt::Display for ProblemChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemChoice::ImCa => "im-ca",
            ProblemChoice::SmCa => "sm-ca",
        })
    }
}

/// A sweep description, read from `key = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    pub directed: bool,
    /// `None` keeps the probabilities of the edge list.
    pub model: Option<ProbModel>,
    pub model_seed: u64,
    /// Uniform thresholds to sweep; ignored when `thresholds` is set.
    pub taus: Vec<f64>,
    /// `node tau` file used instead of a uniform sweep.
    pub thresholds: Option<PathBuf>,
    /// One target label per line; every node when absent.
    pub target: Option<PathBuf>,
    /// One label per line of the nodes allowed as seeds; every node when absent.
    pub candidates: Option<PathBuf>,
    pub problem: ProblemChoice,
    /// `k` values for influence maximization, `eta` values for seed minimization.
    pub budgets: Vec<usize>,
    /// Balance parameters for BTG.
    pub cs: Vec<f64>,
    pub theta: u32,
    pub eval_runs: u64,
    pub seed: u64,
    pub eval_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub out: Option<PathBuf>,
    pub memory_cap: Option<u64>,
}

impl ExperimentConfig {
    pub fn new(graph: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            graph: graph.into(),
            directed: true,
            model: None,
            model_seed: 0,
            taus: vec![0.5],
            thresholds: None,
            target: None,
            candidates: None,
            problem: ProblemChoice::ImCa,
            budgets: vec![10],
            cs: vec![DEFAULT_C_IM],
            theta: DEFAULT_THETA,
            eval_runs: DEFAULT_EVAL_RUNS,
            seed: 0,
            eval_seed: 0,
            algorithms: vec![Algorithm::Btg, Algorithm::Adg],
            out: None,
            memory_cap: None,
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. Relative paths are
    /// resolved against `base`. Unset `c` follows the problem (1.7 for
    /// influence maximization, 1 for seed minimization) and unset
    /// `model_seed` / `eval_seed` follow `seed`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut config = ExperimentConfig::new(PathBuf::new());
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected 'key = value', found '{line}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let value = match key {
                "graph" | "thresholds" | "target" | "candidates" | "out" => base.join(value).to_string_lossy().into_owned(),
                _ => value.to_string(),
            };
            config.set(key, &value).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
            seen.push(key.to_string());
        }
        let has = |k: &str| seen.iter().any(|s| s == k);
        if !has("graph") {
            return Err(Error::InvalidParameter("config needs a 'graph' entry".to_string()));
        }
        if !has("c") && config.problem == ProblemChoice::SmCa {
            config.cs = vec![DEFAULT_C_SM];
        }
        if !has("model_seed") {
            config.model_seed = config.seed;
        }
        if !has("eval_seed") {
            config.eval_seed = config.seed;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_context(e, path))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Sets one key; used for config lines and command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::InvalidParameter(format!("bad value '{v}' for '{key}'")))
        }
        fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
            v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| num(key, s)).collect()
        }
        match key {
            "graph" => self.graph = value.into(),
            "directed" => self.directed = num(key, value)?,
            "model" => self.model = parse_model(value)?,
            "model_seed" => self.model_seed = num(key, value)?,
            "tau" => self.taus = list(key, value)?,
            "thresholds" => self.thresholds = Some(value.into()),
            "target" => self.target = Some(value.into()),
            "candidates" => self.candidates = Some(value.into()),
            "problem" => {
                self.problem = match value {
                    "im-ca" => ProblemChoice::ImCa,
                    "sm-ca" => ProblemChoice::SmCa,
                    _ => return Err(Error::InvalidParameter(format!("unknown problem '{value}'"))),
                }
            }
            "budgets" | "k" | "eta" => self.budgets = list(key, value)?,
            "c" => self.cs = list(key, value)?,
            "theta" => self.theta = num(key, value)?,
            "eval_runs" => self.eval_runs = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "eval_seed" => self.eval_seed = num(key, value)?,
            "algorithms" => {
                self.algorithms = value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect::<Result<_>>()?
            }
            "out" => self.out = Some(value.into()),
            "memory_cap" => self.memory_cap = Some(num(key, value)?),
            _ => return Err(Error::InvalidParameter(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("nothing to run".to_string()));
        }
        if self.budgets.is_empty() || self.budgets.contains(&0) {
            return Err(Error::InvalidParameter("budgets must be a nonempty list of positive counts".to_string()));
        }
        if self.thresholds.is_none() && self.taus.is_empty() {
            return Err(Error::InvalidParameter("tau list is empty".to_string()));
        }
        if let Some(&t) = self.taus.iter().find(|&&t| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::InvalidParameter(format!("threshold {t} outside (0, 1]")));
        }
        if self.algorithms.contains(&Algorithm::Btg) {
            if self.cs.is_empty() {
                return Err(Error::InvalidParameter("c list is empty".to_string()));
            }
            if let Some(&c) = self.cs.iter().find(|&&c| !(c >= 1.0 && c.is_finite())) {
                return Err(Error::InvalidParameter(format!("balance parameter c = {c} must be >= 1")));
            }
        }
        if self.theta == 0 || self.eval_runs == 0 {
            return Err(Error::InvalidParameter("theta and eval_runs must be at least 1".to_string()));
        }
        for path in [Some(&self.graph), self.thresholds.as_ref(), self.target.as_ref(), self.candidates.as_ref()].into_iter().flatten() {
            if !path.is_file() {
                return Err(Error::InvalidParameter(format!("{} does not exist", path.display())));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExperimentConfig {
    /// The resolved configuration in the same `key = value` format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: ToString>(xs: &[T]) -> String {
            xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        writeln!(f, "graph = {}", self.graph.display())?;
        writeln!(f, "directed = {}", self.directed)?;
        writeln!(f, "model = {}", self.model.as_ref().map_or("file".to_string(), |m| m.to_string()))?;
        writeln!(f, "model_seed = {}", self.model_seed)?;
        match &self.thresholds {
            Some(p) => writeln!(f, "thresholds = {}", p.display())?,
            None => writeln!(f, "tau = {}", join(&self.taus))?,
        }
        if let Some(p) = &self.target {
            writeln!(f, "target = {}", p.display())?;
        }
        if let Some(p) = &self.candidates {
            writeln!(f, "candidates = {}", p.display())?;
        }
        writeln!(f, "problem = {}", self.problem)?;
        writeln!(f, "budgets = {}", join(&self.budgets))?;
        writeln!(f, "c = {}", join(&self.cs))?;
        writeln!(f, "theta = {}", self.theta)?;
        writeln!(f, "eval_runs = {}", self.eval_runs)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "eval_seed = {}", self.eval_seed)?;
        let names: Vec<&str> = self.algorithms.iter().map(Algorithm::name).collect();
        writeln!(f, "algorithms = {}", names.join(","))?;
        if let Some(p) = &self.out {
            writeln!(f, "out = {}", p.display())?;
        }
        if let Some(cap) = self.memory_cap {
            writeln!(f, "memory_cap = {cap}")?;
        }
        Ok(())
    }
}

/// One row of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    /// Uniform threshold, or `file`.
    pub tau: String,
    /// Balance parameter for BTG rows, empty otherwise.
    pub c: String,
    pub budget_or_eta: usize,
    pub seeds: Vec<String>,
    pub rho_eval: Option<usize>,
    pub runtime_ms: f64,
    /// `ok`, `ok;near_threshold=<count>` or `infeasible;achieved=<count>`.
    pub status: String,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.algorithm.clone(),
                r.tau.clone(),
                r.c.clone(),
                r.budget_or_eta.to_string(),
                r.seeds.join(";"),
                r.seeds.len().to_string(),
                r.rho_eval.map_or(String::new(), |v| v.to_string()),
                format!("{:.3}", r.runtime_ms),
                r.status.clone(),
                r.master_seed.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows with the given algorithm, in table order.
    pub fn rows_for<'a>(&'a self, algorithm: &'a str) -> impl Iterator<Item = &'a ResultRow> + 'a {
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }
}

/// Shared state for one threshold setting of a sweep.
struct Setting<'a> {
    graph: &'a Graph,
    target: &'a TargetSet,
    thresholds: Thresholds,
    tau: String,
    index: RRIndex,
    index_ms: f64,
    candidates: Option<&'a [NodeId]>,
    config: &'a ExperimentConfig,
}

/// One unit of work inside a setting: an algorithm with its `c`, if any.
#[derive(Clone, Copy)]
struct Job {
    algorithm: Algorithm,
    c: Option<f64>,
}

impl Setting<'_> {
    fn row(&self, job: Job, budget: usize, seeds: &[NodeId], runtime_ms: f64) -> Result<ResultRow> {
        let c = &self.config;
        let eval = evaluate_seeds(self.graph, &self.thresholds, self.target, seeds, c.eval_runs, c.eval_seed)?;
        let status = match eval.near_threshold {
            0 => "ok".to_string(),
            k => format!("ok;near_threshold={k}"),
        };
        Ok(ResultRow {
            algorithm: job.algorithm.name().to_string(),
            tau: self.tau.clone(),
            c: job.c.map_or(String::new(), |c| c.to_string()),
            budget_or_eta: budget,
            seeds: seeds.iter().map(|&v| self.graph.label(v).to_string()).collect(),
            rho_eval: Some(eval.rho_hat),
            runtime_ms,
            status,
            master_seed: c.seed,
        })
    }

    fn infeasible_row(&self, job: Job, eta: usize, achieved: usize, runtime_ms: f64) -> ResultRow {
        ResultRow {
            algorithm: job.algorithm.name().to_string(),
            tau: self.tau.clone(),
            c: job.c.map_or(String::new(), |c| c.to_string()),
            budget_or_eta: eta,
            seeds: Vec::new(),
            rho_eval: None,
            runtime_ms,
            status: format!("infeasible;achieved={achieved}"),
            master_seed: self.config.seed,
        }
    }

    fn spec(&self, budget: usize, strategy: Strategy) -> ProblemSpec {
        let base = match self.config.problem {
            ProblemChoice::ImCa => ProblemSpec::im_ca(budget, self.target.clone(), self.thresholds.clone()),
            ProblemChoice::SmCa => ProblemSpec::sm_ca(budget, self.target.clone(), self.thresholds.clone()),
        };
        let spec = base.with_strategy(strategy).with_theta(self.config.theta).with_seed(self.config.seed);
        match self.candidates {
            Some(list) => spec.with_candidates(list.to_vec()),
            None => spec,
        }
    }

    fn run(&self, job: Job) -> Result<Vec<ResultRow>> {
        let budgets = &self.config.budgets;
        let strategy = match job.algorithm {
            Algorithm::Btg => Some(Strategy::BalancedTruncation { c: job.c.unwrap_or(DEFAULT_C_IM) }),
            Algorithm::Adg => Some(Strategy::ActivationDominance),
            _ => None,
        };
        let start = Instant::now();
        let elapsed = |start: Instant| self.index_ms + start.elapsed().as_secs_f64() * 1e3;
        match (strategy, self.config.problem) {
            (Some(strategy), ProblemChoice::ImCa) => {
                let k_max = *budgets.iter().max().expect("validated nonempty");
                let report = solve_im_ca_with_index(self.index.clone(), &self.spec(k_max, strategy))?;
                let ms = elapsed(start);
                budgets.iter().map(|&k| self.row(job, k, report.prefix(k), ms)).collect()
            }
            (Some(strategy), ProblemChoice::SmCa) => budgets
                .iter()
                .map(|&eta| {
                    let start = Instant::now();
                    match solve_sm_ca_with_index(self.index.clone(), &self.spec(eta, strategy)) {
                        Ok(report) => self.row(job, eta, &report.seeds, elapsed(start)),
                        Err(Error::Infeasible { achieved, .. }) => {
                            Ok(self.infeasible_row(job, eta, achieved, elapsed(start)))
                        }
                        Err(e) => Err(e),
                    }
                })
                .collect(),
            (None, problem) => {
                let pool = self.candidates.map_or(self.graph.node_count(), <[NodeId]>::len);
                let needed = match problem {
                    ProblemChoice::ImCa => *budgets.iter().max().expect("validated nonempty"),
                    ProblemChoice::SmCa => pool,
                };
                let order = self.ranking(job.algorithm, needed)?;
                let ms = elapsed(start);
                match problem {
                    ProblemChoice::ImCa => budgets.iter().map(|&k| self.row(job, k, &order[..k], ms)).collect(),
                    ProblemChoice::SmCa => budgets
                        .iter()
                        .map(|&eta| {
                            let start = Instant::now();
                            match self.shortest_prefix(&order, eta) {
                                Ok(len) => {
                                    let search_ms = start.elapsed().as_secs_f64() * 1e3;
                                    self.row(job, eta, &order[..len], ms + search_ms)
                                }
                                Err(achieved) => Ok(self.infeasible_row(job, eta, achieved, ms)),
                            }
                        })
                        .collect(),
                }
            }
        }
    }

    fn ranking(&self, algorithm: Algorithm, len: usize) -> Result<Vec<NodeId>> {
        let allowed = self.candidates.map(|list| {
            let mut mask = vec![false; self.graph.node_count()];
            list.iter().for_each(|&v| mask[v as usize] = true);
            mask
        });
        let mut order = match algorithm {
            Algorithm::Coverage => return coverage_greedy_among(&self.index, len, allowed.as_deref()),
            Algorithm::Degree => rank_by_degree(self.graph).order,
            Algorithm::PageRank => pagerank(self.graph, DEFAULT_RESTART, DEFAULT_TOLERANCE)?.order,
            Algorithm::Random => random_ranking(self.graph, self.config.seed).order,
            Algorithm::Btg | Algorithm::Adg => unreachable!("greedy algorithms are not rankings"),
        };
        if let Some(mask) = allowed {
            order.retain(|&v| mask[v as usize]);
        }
        order.truncate(len);
        Ok(order)
    }

    /// Targets the RR index estimates active once `prefix` is seeded.
    fn estimated_active(&self, prefix: &[NodeId]) -> usize {
        let mut index = self.index.clone();
        for &v in prefix {
            index.remove_hit_sets(v);
        }
        index.estimated_active_count()
    }

    /// Shortest prefix of `order` the RR index estimates to reach `eta`
    /// active targets, by binary search (coverage is monotone in the
    /// prefix). On failure returns the count reached by the whole order.
    fn shortest_prefix(&self, order: &[NodeId], eta: usize) -> std::result::Result<usize, usize> {
        let full = self.estimated_active(order);
        if full < eta {
            return Err(full);
        }
        let (mut lo, mut hi) = (1, order.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.estimated_active(&order[..mid]) >= eta {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }
}

/// Runs every (threshold, algorithm, c, budget) combination of `config`.
/// Rows follow the threshold list, then the algorithm list, then the c and
/// budget lists; everything but `runtime_ms` is a pure function of the
/// configuration. Infeasible seed-minimization runs become rows with an
/// `infeasible` status.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    config.validate()?;
    let graph = load_graph(&config.graph, config.directed, config.model.as_ref(), config.model_seed)?;
    let n = graph.node_count();
    let target = match &config.target {
        Some(p) => TargetSet::load(BufReader::new(File::open(p).map_err(|e| io_context(e, p))?), &graph)?,
        None => TargetSet::all(n),
    };
    let candidates = match &config.candidates {
        Some(p) => {
            let file = File::open(p).map_err(|e| io_context(e, p))?;
            Some(TargetSet::load(BufReader::new(file), &graph)?.members().to_vec())
        }
        None => None,
    };
    let pool = candidates.as_ref().map_or(n, Vec::len);
    if config.problem == ProblemChoice::ImCa {
        if let Some(&k) = config.budgets.iter().find(|&&k| k > pool) {
            return Err(Error::InvalidParameter(format!("k = {k} exceeds the {pool} candidate seeds")));
        }
    } else if let Some(&eta) = config.budgets.iter().find(|&&e| e > target.len()) {
        return Err(Error::InvalidParameter(format!("eta = {eta} exceeds |U| = {}", target.len())));
    }
    let settings: Vec<(String, Thresholds)> = match &config.thresholds {
        Some(p) => {
            let file = File::open(p).map_err(|e| io_context(e, p))?;
            vec![("file".to_string(), Thresholds::load(BufReader::new(file), &graph, None)?)]
        }
        None => config.taus.iter().map(|&t| Ok((t.to_string(), Thresholds::uniform(n, t)?))).collect::<Result<_>>()?,
    };
    let jobs: Vec<Job> = config
        .algorithms
        .iter()
        .flat_map(|&algorithm| match algorithm {
            Algorithm::Btg => config.cs.iter().map(|&c| Job { algorithm, c: Some(c) }).collect(),
            _ => vec![Job { algorithm, c: None }],
        })
        .collect();

    let mut table = ResultTable::default();
    for (tau, thresholds) in settings {
        let start = Instant::now();
        let index = RRIndex::build(&graph, &target, &thresholds, config.theta, config.seed, config.memory_cap)?;
        let setting = Setting {
            graph: &graph,
            target: &target,
            thresholds,
            tau,
            index,
            index_ms: start.elapsed().as_secs_f64() * 1e3,
            candidates: candidates.as_deref(),
            config,
        };
        let rows: Vec<Vec<ResultRow>> = jobs.par_iter().map(|&job| setting.run(job)).collect::<Result<_>>()?;
        table.rows.extend(rows.into_iter().flatten());
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn star_config(dir: &Path) -> ExperimentConfig {
        let graph = dir.join("star.txt");
        std::fs::write(&graph, fixtures::STAR).unwrap();
        let text = "graph = star.txt\ntau = 1\nbudgets = 1,2\ntheta = 16\neval_runs = 50\n\
                    algorithms = adg,coverage,degree,random\nseed = 3\n";
        ExperimentConfig::parse(text, dir).unwrap()
    }

    #[test]
    fn evaluation_basics() {
        let g = fixtures::star();
        let t = Thresholds::uniform(4, 1.0).unwrap();
        let all = TargetSet::all(4);
        let e = evaluate_seeds(&g, &t, &all, &g.nodes(["a", "b"]).unwrap(), 7, 1).unwrap();
        assert_eq!(e.rho_hat, 4);
        assert_eq!(evaluate_seeds(&g, &t, &all, &[], 7, 1).unwrap().rho_hat, 0);
    }

    #[test]
    fn evaluation_ignores_solver_seed() {
        let g = fixtures::fan_in3();
        let t = fixtures::fan_in3_thresholds(&g);
        let all = TargetSet::all(4);
        let seeds = g.nodes(["a", "b"]).unwrap();
        let e1 = evaluate_seeds(&g, &t, &all, &seeds, 2000, 5).unwrap();
        let e2 = evaluate_seeds(&g, &t, &all, &seeds, 2000, 5).unwrap();
        assert_eq!(e1, e2);
        let cascade = crate::cascade::estimate(&g, &seeds, &t, &all, 2000, 1.0, 5).unwrap();
        assert_ne!(cascade.activation.probabilities(), e1.probs);
    }

    #[test]
    fn star_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let config = star_config(dir.path());
        let table = run_experiment(&config).unwrap();
        assert_eq!(table.rows.len(), 8);
        let adg2 = table.rows_for("adg").find(|r| r.budget_or_eta == 2).unwrap();
        assert_eq!(adg2.rho_eval, Some(4));
        assert_eq!(adg2.seeds, vec!["a", "b"]);
        let cov: Vec<_> = table.rows_for("coverage").map(|r| r.seeds.join(";")).collect();
        assert_eq!(cov, vec!["a", "a;b"]);
    }

    #[test]
    fn sweep_csv_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let config = star_config(dir.path());
        let csv = |t: &ResultTable| {
            let mut out = Vec::new();
            t.write_csv(&mut out).unwrap();
            String::from_utf8(out).unwrap()
        };
        let a = csv(&run_experiment(&config).unwrap());
        let b = csv(&run_experiment(&config).unwrap());
        let strip = |s: &str| -> Vec<String> {
            s.lines()
                .map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 7).map(|(_, f)| f).collect::<Vec<_>>().join(","))
                .collect()
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.lines().next().unwrap(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn seed_minimization_rows() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = star_config(dir.path());
        config.problem = ProblemChoice::SmCa;
        config.budgets = vec![3, 4];
        config.algorithms = vec![Algorithm::Btg, Algorithm::Degree];
        config.cs = vec![1.0];
        let table = run_experiment(&config).unwrap();
        let counts: Vec<_> = table.rows.iter().map(|r| (r.algorithm.as_str(), r.budget_or_eta, r.seeds.len())).collect();
        assert_eq!(counts, vec![("btg", 3, 1), ("btg", 4, 2), ("degree", 3, 1), ("degree", 4, 2)]);
    }

    #[test]
    fn infeasible_becomes_a_row() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = star_config(dir.path());
        config.problem = ProblemChoice::SmCa;
        config.budgets = vec![4];
        config.algorithms = vec![Algorithm::Adg];
        let candidates = dir.path().join("cands.txt");
        // b alone reaches only itself and y.
        std::fs::write(&candidates, "b\n").unwrap();
        config.candidates = Some(candidates);
        let table = run_experiment(&config).unwrap();
        assert!(table.rows[0].status.starts_with("infeasible"), "{:?}", table.rows[0]);
    }

    #[test]
    fn rejects_empty_algorithm_list() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = star_config(dir.path());
        config.algorithms.clear();
        let err = run_experiment(&config).unwrap_err();
        assert!(err.to_string().contains("nothing to run"));
    }

    #[test]
    fn config_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let config = star_config(dir.path());
        assert_eq!(config.eval_seed, 3);
        let again = ExperimentConfig::parse(&config.to_string(), Path::new("/")).unwrap();
        assert_eq!(again, config);
        assert!(ExperimentConfig::parse("graph = x\nbogus = 1\n", dir.path()).is_err());
        assert!(ExperimentConfig::parse("tau = 0.5\n", dir.path()).is_err());
        assert!(parse_model("constant:0.2").unwrap() == Some(ProbModel::Constant(0.2)));
        assert!(parse_model("nope").is_err());
        let sm = ExperimentConfig::parse("graph = g\nproblem = sm-ca\n", dir.path()).unwrap();
        assert_eq!(sm.cs, vec![1.0]);
    }
}
