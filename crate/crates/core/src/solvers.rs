//! Greedy seed selection for influence maximization and seed minimization
//! under cumulative activation.
//!
//! The RR-set greedy builds an [`RRIndex`], then repeatedly picks a node
//! with one of two rules, adds it to the seed set and removes every RR set
//! it hits:
//!
//! * balanced truncation (BTG) maximizes
//!   `inc(v) = sum_{u: req(u) > 0} min(overlap(v, R_u), c * req(u))`;
//! * activation dominance (ADG) maximizes the number of targets `v` alone
//!   would push to their requirement, breaking ties by
//!   `sum_{u: req(u) > 0} min(overlap(v, R_u), req(u))`.
//!
//! Remaining ties go to the smallest node id. Influence maximization stops
//! after `k` picks, seed minimization once `eta` targets are estimated
//! active. [`solve_full_coverage`] is the separate surrogate greedy for the
//! case where every target must become active.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::experiment::Evaluation;
use crate::graph::{Graph, NodeId, TargetSet, Thresholds};
use crate::oracle::{LiveEdgeTable, THRESHOLD_GUARD};
use crate::problem::{ProblemKind, ProblemSpec, Strategy};
use crate::rng::{counter_uniform, Domain, Substreams};
use crate::rrset::RRIndex;

/// One pick of a selection rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub node: NodeId,
    /// Primary score: `inc(v)` for BTG, activation count for ADG.
    pub gain: f64,
    /// ADG's truncated-coverage tie-break score.
    pub tie_break: Option<f64>,
    /// No candidate had a positive score; `node` is the smallest allowed id.
    pub no_gain: bool,
}

/// Scratch buffers reused across selection steps.
pub struct Selector {
    counts: Vec<u32>,
    touched: Vec<NodeId>,
    seen: Vec<bool>,
    candidates: Vec<NodeId>,
    score: Vec<f64>,
    activations: Vec<u64>,
    coverage: Vec<u64>,
}

impl Selector {
    pub fn new(n: usize) -> Self {
        Selector {
            counts: vec![0; n],
            touched: Vec::new(),
            seen: vec![false; n],
            candidates: Vec::new(),
            score: vec![0.0; n],
            activations: vec![0; n],
            coverage: vec![0; n],
        }
    }

    /// Picks the next seed among nodes with `excluded[v] == false`.
    /// Returns `None` when every node is excluded.
    pub fn select(&mut self, index: &RRIndex, strategy: Strategy, excluded: &[bool]) -> Option<Selection> {
        for slot in 0..index.slot_count() {
            let req = index.slot_req(slot);
            if req <= 0 {
                continue;
            }
            for sid in index.slot_sets(slot) {
                if index.is_removed(sid) {
                    continue;
                }
                for &v in index.set(sid) {
                    if self.counts[v as usize] == 0 {
                        self.touched.push(v);
                    }
                    self.counts[v as usize] += 1;
                }
            }
            for &v in &self.touched {
                let vi = v as usize;
                let overlap = std::mem::take(&mut self.counts[vi]) as i64;
                if excluded[vi] {
                    continue;
                }
                match strategy {
                    Strategy::BalancedTruncation { c } => {
                        self.score[vi] += (overlap as f64).min(c * req as f64);
                    }
                    Strategy::ActivationDominance => {
                        if overlap >= req {
                            self.activations[vi] += 1;
                        }
                        self.coverage[vi] += overlap.min(req) as u64;
                    }
                }
                if !self.seen[vi] {
                    self.seen[vi] = true;
                    self.candidates.push(v);
                }
            }
            self.touched.clear();
        }

        let mut best: Option<Selection> = None;
        for &v in &self.candidates {
            let vi = v as usize;
            let pick = match strategy {
                Strategy::BalancedTruncation { .. } => {
                    Selection { node: v, gain: self.score[vi], tie_break: None, no_gain: false }
                }
                Strategy::ActivationDominance => Selection {
                    node: v,
                    gain: self.activations[vi] as f64,
                    tie_break: Some(self.coverage[vi] as f64),
                    no_gain: false,
                },
            };
            if best.is_none_or(|b| better(&pick, &b)) {
                best = Some(pick);
            }
        }
        for &v in &self.candidates {
            let vi = v as usize;
            self.seen[vi] = false;
            self.score[vi] = 0.0;
            self.activations[vi] = 0;
            self.coverage[vi] = 0;
        }
        self.candidates.clear();

        let positive = best.filter(|b| b.gain > 0.0 || b.tie_break.is_some_and(|t| t > 0.0));
        positive.or_else(|| {
            let node = excluded.iter().position(|&e| !e)? as NodeId;
            let tie_break = matches!(strategy, Strategy::ActivationDominance).then_some(0.0);
            Some(Selection { node, gain: 0.0, tie_break, no_gain: true })
        })
    }
}

/// Lexicographic (gain, tie-break) descending, then smaller id.
fn better(a: &Selection, b: &Selection) -> bool {
    a.gain
        .total_cmp(&b.gain)
        .then_with(|| a.tie_break.unwrap_or(0.0).total_cmp(&b.tie_break.unwrap_or(0.0)))
        .then_with(|| b.node.cmp(&a.node))
        == Ordering::Greater
}

/// Balanced-truncation pick on the current index state.
pub fn ssbt_select(index: &RRIndex, c: f64, excluded: &[bool]) -> Option<Selection> {
    Selector::new(index.node_count()).select(index, Strategy::BalancedTruncation { c }, excluded)
}

/// Activation-dominance pick on the current index state.
pub fn ssad_select(index: &RRIndex, excluded: &[bool]) -> Option<Selection> {
    Selector::new(index.node_count()).select(index, Strategy::ActivationDominance, excluded)
}

/// Bookkeeping for one greedy step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub node: NodeId,
    pub gain: f64,
    pub tie_break: Option<f64>,
    /// Targets estimated cumulatively active after this step.
    pub estimated_active: usize,
    pub no_gain: bool,
    /// Set by the surrogate greedy when the gain is below twice the
    /// estimator's error bound.
    pub below_noise_floor: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTiming {
    pub phase: &'static str,
    pub elapsed: Duration,
}

/// Everything a solver run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: String,
    pub seeds: Vec<NodeId>,
    pub steps: Vec<StepRecord>,
    pub timings: Vec<PhaseTiming>,
    pub master_seed: u64,
    /// Final surrogate estimate, for the full-coverage greedy.
    pub surrogate_value: Option<f64>,
    /// Independent Monte-Carlo evaluation, filled in by the caller.
    pub evaluation: Option<Evaluation>,
}

impl RunReport {
    pub fn estimated_active(&self) -> usize {
        self.steps.last().map_or(0, |s| s.estimated_active)
    }

    /// Seeds of the first `len` steps.
    pub fn prefix(&self, len: usize) -> &[NodeId] {
        &self.seeds[..len.min(self.seeds.len())]
    }

    /// Writes `step` records (index, node, gain, estimated active), then a
    /// `summary` record, then a `timing` record.
    pub fn write_records<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        for s in &self.steps {
            write!(out, "step\t{}\t{}\t{}\t{}", s.step, graph.label(s.node), s.gain, s.estimated_active)?;
            if let Some(t) = s.tie_break {
                write!(out, "\ttie_break={t}")?;
            }
            if s.no_gain {
                write!(out, "\tno_gain")?;
            }
            if s.below_noise_floor {
                write!(out, "\tbelow_noise_floor")?;
            }
            writeln!(out)?;
        }
        let seeds: Vec<&str> = self.seeds.iter().map(|&v| graph.label(v)).collect();
        write!(
            out,
            "summary\talgorithm={}\tseed_count={}\tseeds={}\test_active={}\tmaster_seed={}",
            self.algorithm,
            self.seeds.len(),
            seeds.join(","),
            self.estimated_active(),
            self.master_seed
        )?;
        if let Some(v) = self.surrogate_value {
            write!(out, "\tsurrogate={v}")?;
        }
        if let Some(e) = &self.evaluation {
            write!(out, "\trho_eval={}\teval_runs={}", e.rho_hat, e.runs)?;
        }
        writeln!(out)?;
        let times: Vec<String> =
            self.timings.iter().map(|t| format!("{}_ms={:.3}", t.phase, t.elapsed.as_secs_f64() * 1e3)).collect();
        writeln!(out, "timing\t{}", times.join("\t"))?;
        Ok(())
    }
}

/// Builds the RR index a spec asks for.
pub fn build_spec_index(graph: &Graph, spec: &ProblemSpec) -> Result<RRIndex> {
    RRIndex::build(graph, &spec.target, &spec.thresholds, spec.theta, spec.seed, spec.memory_cap)
}

fn check_index(index: &RRIndex, spec: &ProblemSpec) -> Result<()> {
    if index.owners() != spec.target.members() {
        return Err(Error::InvalidParameter("RR index was built for a different target set".to_string()));
    }
    Ok(())
}

/// Runs the RR-set greedy until `stop` says so or no candidate remains.
fn run_greedy(
    mut index: RRIndex,
    spec: &ProblemSpec,
    mut stop: impl FnMut(usize, usize) -> bool,
) -> (Vec<StepRecord>, Vec<NodeId>, RRIndex) {
    let n = index.node_count();
    let mut excluded: Vec<bool> = spec.candidate_mask(n).into_iter().map(|ok| !ok).collect();
    let mut selector = Selector::new(n);
    let mut steps = Vec::new();
    let mut seeds = Vec::new();
    while !stop(seeds.len(), index.estimated_active_count()) {
        let Some(pick) = selector.select(&index, spec.strategy, &excluded) else { break };
        excluded[pick.node as usize] = true;
        index.remove_hit_sets(pick.node);
        seeds.push(pick.node);
        steps.push(StepRecord {
            step: seeds.len(),
            node: pick.node,
            gain: pick.gain,
            tie_break: pick.tie_break,
            estimated_active: index.estimated_active_count(),
            no_gain: pick.no_gain,
            below_noise_floor: false,
        });
    }
    (steps, seeds, index)
}

fn algorithm_name(spec: &ProblemSpec) -> String {
    let problem = match spec.kind {
        ProblemKind::InfluenceMax { .. } => "im-ca",
        ProblemKind::SeedMin { .. } => "sm-ca",
    };
    format!("{}-{problem}", spec.strategy)
}

/// Influence maximization: exactly `k` seeds.
pub fn solve_im_ca(graph: &Graph, spec: &ProblemSpec) -> Result<RunReport> {
    spec.validate(graph)?;
    let start = Instant::now();
    let index = build_spec_index(graph, spec)?;
    let built = start.elapsed();
    let mut report = solve_im_ca_with_index(index, spec)?;
    report.timings.insert(0, PhaseTiming { phase: "index", elapsed: built });
    Ok(report)
}

/// Influence maximization on a prebuilt (possibly snapshot-loaded) index.
pub fn solve_im_ca_with_index(index: RRIndex, spec: &ProblemSpec) -> Result<RunReport> {
    let ProblemKind::InfluenceMax { k } = spec.kind else {
        return Err(Error::InvalidParameter("expected an influence-maximization spec".to_string()));
    };
    check_index(&index, spec)?;
    let n = index.node_count();
    let pool = spec.candidate_mask(n).iter().filter(|&&b| b).count();
    if k == 0 || k > pool {
        return Err(Error::InvalidParameter(format!("k = {k} must be in 1..={pool}")));
    }
    let start = Instant::now();
    let (steps, seeds, _) = run_greedy(index.clone(), spec, |picked, _| picked >= k);
    Ok(RunReport {
        algorithm: algorithm_name(spec),
        seeds,
        steps,
        timings: vec![PhaseTiming { phase: "select", elapsed: start.elapsed() }],
        master_seed: spec.seed,
        surrogate_value: None,
        evaluation: None,
    })
}

/// Seed minimization: the shortest greedy prefix with at least `eta`
/// targets estimated active. The loop is bounded by the candidate count,
/// not by `eta`, since a seed outside the target set may activate nothing.
pub fn solve_sm_ca(graph: &Graph, spec: &ProblemSpec) -> Result<RunReport> {
    spec.validate(graph)?;
    let start = Instant::now();
    let index = build_spec_index(graph, spec)?;
    let built = start.elapsed();
    let mut report = solve_sm_ca_with_index(index, spec)?;
    report.timings.insert(0, PhaseTiming { phase: "index", elapsed: built });
    Ok(report)
}

pub fn solve_sm_ca_with_index(index: RRIndex, spec: &ProblemSpec) -> Result<RunReport> {
    let ProblemKind::SeedMin { eta } = spec.kind else {
        return Err(Error::InvalidParameter("expected a seed-minimization spec".to_string()));
    };
    check_index(&index, spec)?;
    if eta == 0 || eta > spec.target.len() {
        return Err(Error::InvalidParameter(format!("eta = {eta} must be in 1..={}", spec.target.len())));
    }
    let start = Instant::now();
    let (steps, seeds, index) = run_greedy(index, spec, |_, active| active >= eta);
    let achieved = index.estimated_active_count();
    if achieved < eta {
        return Err(Error::Infeasible { achieved, required: eta });
    }
    Ok(RunReport {
        algorithm: algorithm_name(spec),
        seeds,
        steps,
        timings: vec![PhaseTiming { phase: "select", elapsed: start.elapsed() }],
        master_seed: spec.seed,
        surrogate_value: None,
        evaluation: None,
    })
}

/// How the full-coverage greedy estimates `f(S) = sum_u min(P_u(S), tau_u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurrogateEstimator {
    /// Live-edge enumeration; small graphs only.
    Exact,
    /// `runs` sampled live-edge worlds shared by every evaluation.
    MonteCarlo { runs: u64 },
    /// Coverage fractions of `theta` RR sets per target.
    RrIndex { theta: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullCoverageOptions {
    /// Stop once `f_hat(S) >= sum tau - epsilon`.
    pub epsilon: f64,
    pub estimator: SurrogateEstimator,
    /// Lazy-forward evaluation of marginal gains.
    pub lazy: bool,
}

impl Default for FullCoverageOptions {
    fn default() -> Self {
        FullCoverageOptions { epsilon: 0.1, estimator: SurrogateEstimator::RrIndex { theta: 1000 }, lazy: true }
    }
}

/// Incrementally maintained estimate of the truncated surrogate.
trait Surrogate {
    fn value(&self) -> f64;
    /// `f_hat(S + v) - f_hat(S)`.
    fn marginal(&mut self, v: NodeId) -> f64;
    fn commit(&mut self, v: NodeId);
    fn active_count(&self) -> usize;
    /// Error bound `gamma` of the estimator.
    fn noise_floor(&self) -> f64;
}

fn truncated_gain(hits: &[(usize, u64)], base: &[u64], samples: f64, taus: &[f64]) -> f64 {
    hits.iter()
        .map(|&(slot, extra)| {
            let tau = taus[slot];
            ((base[slot] + extra) as f64 / samples).min(tau) - (base[slot] as f64 / samples).min(tau)
        })
        .sum()
}

struct ExactSurrogate {
    table: LiveEdgeTable,
    members: Vec<NodeId>,
    taus: Vec<f64>,
    seeds: u64,
    probs: Vec<f64>,
}

impl ExactSurrogate {
    fn value_of(&self, probs: &[f64]) -> f64 {
        self.members.iter().zip(&self.taus).map(|(&u, &t)| probs[u as usize].min(t)).sum()
    }
}

impl Surrogate for ExactSurrogate {
    fn value(&self) -> f64 {
        self.value_of(&self.probs)
    }

    fn marginal(&mut self, v: NodeId) -> f64 {
        let next = self.table.probs(self.seeds | 1u64 << v);
        self.members
            .iter()
            .zip(&self.taus)
            .map(|(&u, &t)| next[u as usize].min(t) - self.probs[u as usize].min(t))
            .sum()
    }

    fn commit(&mut self, v: NodeId) {
        self.seeds |= 1u64 << v;
        self.probs = self.table.probs(self.seeds);
    }

    fn active_count(&self) -> usize {
        self.members.iter().zip(&self.taus).filter(|(&u, &t)| self.probs[u as usize] >= t - THRESHOLD_GUARD).count()
    }

    fn noise_floor(&self) -> f64 {
        0.0
    }
}

struct RrSurrogate {
    index: RRIndex,
    taus: Vec<f64>,
    hits: Vec<u64>,
    scratch: Vec<(usize, u64)>,
    gamma: f64,
}

impl Surrogate for RrSurrogate {
    fn value(&self) -> f64 {
        let theta = self.index.theta() as f64;
        self.hits.iter().zip(&self.taus).map(|(&h, &t)| (h as f64 / theta).min(t)).sum()
    }

    fn marginal(&mut self, v: NodeId) -> f64 {
        self.scratch.clear();
        let theta = self.index.theta() as usize;
        for sid in self.index.live_memberships(v) {
            let slot = sid / theta;
            match self.scratch.last_mut() {
                Some(last) if last.0 == slot => last.1 += 1,
                _ => self.scratch.push((slot, 1)),
            }
        }
        truncated_gain(&self.scratch, &self.hits, theta as f64, &self.taus)
    }

    fn commit(&mut self, v: NodeId) {
        for (owner, count) in self.index.remove_hit_sets(v).per_owner {
            let slot = self.index.slot(owner).expect("removed sets belong to owners");
            self.hits[slot] += count as u64;
        }
    }

    fn active_count(&self) -> usize {
        self.index.estimated_active_count()
    }

    fn noise_floor(&self) -> f64 {
        self.gamma
    }
}

/// `runs` live-edge worlds; arc `e` is live in world `r` when a
/// counter-based uniform keyed by `(r, e)` falls below its probability, so
/// worlds are never stored and every seed set sees the same worlds.
struct MonteCarloSurrogate<'g> {
    graph: &'g Graph,
    key: u64,
    runs: u64,
    slot_of: Vec<Option<usize>>,
    taus: Vec<f64>,
    reached: Vec<bool>,
    counts: Vec<u64>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<NodeId>,
    delta: Vec<u64>,
    touched: Vec<usize>,
    gamma: f64,
}

impl<'g> MonteCarloSurrogate<'g> {
    fn new(graph: &'g Graph, target: &TargetSet, thresholds: &Thresholds, runs: u64, seed: u64) -> Self {
        let n = graph.node_count();
        let mut slot_of = vec![None; n];
        for (i, &u) in target.members().iter().enumerate() {
            slot_of[u as usize] = Some(i);
        }
        let nf = n as f64;
        MonteCarloSurrogate {
            graph,
            key: Substreams::new(seed, Domain::LiveEdge).hash_key(),
            runs,
            slot_of,
            taus: target.members().iter().map(|&u| thresholds.get(u)).collect(),
            reached: vec![false; n * runs as usize],
            counts: vec![0; target.len()],
            stamp: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
            delta: vec![0; target.len()],
            touched: Vec::new(),
            gamma: nf * ((2.0 * nf * nf).ln() / (2.0 * runs as f64)).sqrt(),
        }
    }

    /// Nodes newly reached from `v` in world `r`, left in `self.queue`.
    fn spread(&mut self, v: NodeId, r: u64) {
        let n = self.graph.node_count();
        let base = r as usize * n;
        self.queue.clear();
        if self.reached[base + v as usize] {
            return;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.stamp[v as usize] = epoch;
        self.queue.push(v);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for e in self.graph.out_arc_range(x) {
                let (y, p) = self.graph.arc(e);
                let yi = y as usize;
                if self.stamp[yi] != epoch
                    && !self.reached[base + yi]
                    && counter_uniform(self.key, r, e as u64) < p
                {
                    self.stamp[yi] = epoch;
                    self.queue.push(y);
                }
            }
        }
    }
}

impl Surrogate for MonteCarloSurrogate<'_> {
    fn value(&self) -> f64 {
        let r = self.runs as f64;
        self.counts.iter().zip(&self.taus).map(|(&c, &t)| (c as f64 / r).min(t)).sum()
    }

    fn marginal(&mut self, v: NodeId) -> f64 {
        for r in 0..self.runs {
            self.spread(v, r);
            for i in 0..self.queue.len() {
                if let Some(slot) = self.slot_of[self.queue[i] as usize] {
                    if self.delta[slot] == 0 {
                        self.touched.push(slot);
                    }
                    self.delta[slot] += 1;
                }
            }
        }
        self.touched.sort_unstable();
        let hits: Vec<(usize, u64)> =
            self.touched.iter().map(|&s| (s, std::mem::take(&mut self.delta[s]))).collect();
        self.touched.clear();
        truncated_gain(&hits, &self.counts, self.runs as f64, &self.taus)
    }

    fn commit(&mut self, v: NodeId) {
        let n = self.graph.node_count();
        for r in 0..self.runs {
            self.spread(v, r);
            for i in 0..self.queue.len() {
                let x = self.queue[i] as usize;
                self.reached[r as usize * n + x] = true;
                if let Some(slot) = self.slot_of[x] {
                    self.counts[slot] += 1;
                }
            }
        }
    }

    fn active_count(&self) -> usize {
        let r = self.runs as f64;
        self.counts.iter().zip(&self.taus).filter(|(&c, &t)| c as f64 / r >= t).count()
    }

    fn noise_floor(&self) -> f64 {
        self.gamma
    }
}

#[derive(Clone, Copy)]
struct HeapEntry {
    gain: f64,
    node: NodeId,
    round: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.total_cmp(&other.gain).then_with(|| other.node.cmp(&self.node))
    }
}

/// Greedy on the truncated surrogate for the requirement that every target
/// becomes cumulatively active: add the node with the largest estimated
/// marginal gain until `f_hat(S) >= sum tau - epsilon`.
///
/// The spec must be a seed-minimization spec with `eta = |U|`. Estimates
/// share their randomness across seed sets, so `f_hat` stays monotone and
/// submodular and the lazy variant returns the naive greedy's seeds.
pub fn solve_full_coverage(graph: &Graph, spec: &ProblemSpec, options: &FullCoverageOptions) -> Result<RunReport> {
    match spec.kind {
        ProblemKind::SeedMin { eta } if eta == spec.target.len() => {}
        _ => {
            return Err(Error::InvalidParameter(
                "full coverage needs a seed-minimization spec with eta = |U|".to_string(),
            ))
        }
    }
    spec.validate(graph)?;
    if !(options.epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {} must be positive", options.epsilon)));
    }

    let start = Instant::now();
    let taus: Vec<f64> = spec.target.members().iter().map(|&u| spec.thresholds.get(u)).collect();
    let mut surrogate: Box<dyn Surrogate + '_> = match options.estimator {
        SurrogateEstimator::Exact => {
            let table = LiveEdgeTable::new(graph)?;
            let probs = vec![0.0; graph.node_count()];
            Box::new(ExactSurrogate { table, members: spec.target.members().to_vec(), taus, seeds: 0, probs })
        }
        SurrogateEstimator::RrIndex { theta } => {
            let index = RRIndex::build(graph, &spec.target, &spec.thresholds, theta, spec.seed, spec.memory_cap)?;
            let nf = graph.node_count() as f64;
            let gamma = spec.target.len() as f64 * ((2.0 * nf).ln() / (2.0 * theta as f64)).sqrt();
            Box::new(RrSurrogate { hits: vec![0; taus.len()], index, taus, scratch: Vec::new(), gamma })
        }
        SurrogateEstimator::MonteCarlo { runs } => {
            if runs == 0 {
                return Err(Error::InvalidParameter("run count must be at least 1".to_string()));
            }
            Box::new(MonteCarloSurrogate::new(graph, &spec.target, &spec.thresholds, runs, spec.seed))
        }
    };
    let prepared = start.elapsed();

    let start = Instant::now();
    let goal = spec.thresholds.total_over(&spec.target) - options.epsilon;
    let mut allowed = spec.candidate_mask(graph.node_count());
    let gamma = surrogate.noise_floor();
    let mut steps = Vec::new();
    let mut seeds = Vec::new();
    let mut heap: Option<BinaryHeap<HeapEntry>> = None;

    while surrogate.value() < goal {
        let pick = if options.lazy {
            let heap = heap.get_or_insert_with(|| {
                (0..graph.node_count() as NodeId)
                    .filter(|&v| allowed[v as usize])
                    .map(|v| HeapEntry { gain: surrogate.marginal(v), node: v, round: 0 })
                    .collect()
            });
            let round = seeds.len();
            loop {
                let Some(top) = heap.pop() else { break None };
                if top.round == round {
                    break Some((top.node, top.gain));
                }
                heap.push(HeapEntry { gain: surrogate.marginal(top.node), node: top.node, round });
            }
        } else {
            let mut best: Option<HeapEntry> = None;
            for v in (0..graph.node_count() as NodeId).filter(|&v| allowed[v as usize]) {
                let entry = HeapEntry { gain: surrogate.marginal(v), node: v, round: 0 };
                if best.is_none_or(|b| entry > b) {
                    best = Some(entry);
                }
            }
            best.map(|b| (b.node, b.gain))
        };
        let Some((node, gain)) = pick else {
            return Err(Error::Infeasible { achieved: surrogate.active_count(), required: spec.target.len() });
        };
        allowed[node as usize] = false;
        surrogate.commit(node);
        seeds.push(node);
        steps.push(StepRecord {
            step: seeds.len(),
            node,
            gain,
            tie_break: None,
            estimated_active: surrogate.active_count(),
            no_gain: gain <= 0.0,
            below_noise_floor: gain < 2.0 * gamma,
        });
    }

    Ok(RunReport {
        algorithm: "surrogate-greedy-full".to_string(),
        seeds,
        steps,
        timings: vec![
            PhaseTiming { phase: "estimator", elapsed: prepared },
            PhaseTiming { phase: "select", elapsed: start.elapsed() },
        ],
        master_seed: spec.seed,
        surrogate_value: Some(surrogate.value()),
        evaluation: None,
    })
}
