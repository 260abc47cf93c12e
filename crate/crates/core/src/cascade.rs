//! Forward independent-cascade simulation and Monte-Carlo estimates of
//! activation probabilities and the objectives built on them.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, TargetSet, Thresholds};
use crate::oracle;
use crate::rng::{Domain, Substreams};

/// Runs per random substream: runs `[b * RUN_BLOCK, (b + 1) * RUN_BLOCK)`
/// always draw from stream `b`, whatever the thread layout.
pub const RUN_BLOCK: u64 = 1024;

/// Reusable scratch space for repeated cascades on one graph.
pub struct CascadeSimulator<'g> {
    graph: &'g Graph,
    stamp: Vec<u32>,
    epoch: u32,
    active: Vec<NodeId>,
}

impl<'g> CascadeSimulator<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        CascadeSimulator { graph, stamp: vec![0; graph.node_count()], epoch: 0, active: Vec::new() }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Runs one cascade and returns the active nodes in activation order.
    /// Every arc leaving a newly active node toward an inactive node is
    /// tried once.
    pub fn simulate<R: Rng + ?Sized>(&mut self, seeds: &[NodeId], rng: &mut R) -> &[NodeId] {
        self.next_epoch();
        let epoch = self.epoch;
        self.active.clear();
        for &s in seeds {
            if self.stamp[s as usize] != epoch {
                self.stamp[s as usize] = epoch;
                self.active.push(s);
            }
        }
        let mut head = 0;
        while head < self.active.len() {
            let x = self.active[head];
            head += 1;
            for (y, p) in self.graph.out_edges(x) {
                if self.stamp[y as usize] != epoch && rng.gen::<f64>() < p {
                    self.stamp[y as usize] = epoch;
                    self.active.push(y);
                }
            }
        }
        &self.active
    }
}

/// One cascade from `seeds`; the active set in increasing id order.
pub fn simulate_cascade<R: Rng + ?Sized>(graph: &Graph, seeds: &[NodeId], rng: &mut R) -> Vec<NodeId> {
    let mut sim = CascadeSimulator::new(graph);
    let mut active = sim.simulate(seeds, rng).to_vec();
    active.sort_unstable();
    active
}

/// Activation counts `X_u` over `runs` cascades.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationEstimate {
    pub runs: u64,
    pub counts: Vec<u64>,
}

impl ActivationEstimate {
    /// `X_u / R`.
    pub fn probability(&self, u: NodeId) -> f64 {
        self.counts[u as usize] as f64 / self.runs as f64
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.counts.len() as NodeId).map(|u| self.probability(u)).collect()
    }
}

/// Output of [`estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub activation: ActivationEstimate,
    /// `sum_{u in U} min(P_u, tau_u)`.
    pub f_hat: f64,
    /// `sum_{u in U} min(P_u, c * tau_u)`.
    pub big_f_hat: f64,
    /// `|{u in U : P_u >= tau_u}|`.
    pub rho_hat: usize,
}

/// Counts activations over `runs` cascades drawn from `streams`.
pub fn activation_counts(graph: &Graph, seeds: &[NodeId], runs: u64, streams: &Substreams) -> Result<ActivationEstimate> {
    if runs == 0 {
        return Err(Error::InvalidParameter("run count must be at least 1".to_string()));
    }
    if let Some(s) = seeds.iter().find(|&&s| s as usize >= graph.node_count()) {
        return Err(Error::InvalidParameter(format!("seed {s} out of range")));
    }
    let n = graph.node_count();
    let blocks = runs.div_ceil(RUN_BLOCK);
    let counts = (0..blocks)
        .into_par_iter()
        .fold(
            || (vec![0u64; n], CascadeSimulator::new(graph)),
            |(mut counts, mut sim), b| {
                let mut rng = streams.stream(b);
                let in_block = RUN_BLOCK.min(runs - b * RUN_BLOCK);
                for _ in 0..in_block {
                    for &x in sim.simulate(seeds, &mut rng) {
                        counts[x as usize] += 1;
                    }
                }
                (counts, sim)
            },
        )
        .map(|(counts, _)| counts)
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ActivationEstimate { runs, counts })
}

/// Summarizes activation counts into the three objectives.
pub fn summarize(activation: ActivationEstimate, thresholds: &Thresholds, target: &TargetSet, c: f64) -> Estimate {
    let mut f_hat = 0.0;
    let mut big_f_hat = 0.0;
    let mut rho_hat = 0;
    for &u in target.members() {
        let p = activation.probability(u);
        let tau = thresholds.get(u);
        f_hat += p.min(tau);
        big_f_hat += p.min(c * tau);
        if p >= tau {
            rho_hat += 1;
        }
    }
    Estimate { activation, f_hat, big_f_hat, rho_hat }
}

/// Monte-Carlo estimate of activation probabilities and the truncated
/// objectives from `runs` cascades. Bit-reproducible for a given `seed`.
pub fn estimate(
    graph: &Graph,
    seeds: &[NodeId],
    thresholds: &Thresholds,
    target: &TargetSet,
    runs: u64,
    c: f64,
    seed: u64,
) -> Result<Estimate> {
    let activation = activation_counts(graph, seeds, runs, &Substreams::new(seed, Domain::Cascade))?;
    Ok(summarize(activation, thresholds, target, c))
}

/// Smallest run count `R >= n^2 ln(2 n^(delta+1)) / (2 gamma^2)`, which
/// bounds `|f_hat - f| <= gamma` with probability at least `1 - n^-delta`.
pub fn required_runs(n: usize, gamma: f64, delta: f64) -> Result<u64> {
    if n == 0 || !(gamma > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("need n >= 1, gamma > 0, delta > 0 (got {n}, {gamma}, {delta})")));
    }
    let nf = n as f64;
    let log_term = std::f64::consts::LN_2 + (delta + 1.0) * nf.ln();
    let r = (nf * nf * log_term / (2.0 * gamma * gamma)).ceil();
    if !r.is_finite() || r >= u64::MAX as f64 {
        return Err(Error::InvalidParameter(format!("required run count overflows ({r})")));
    }
    Ok((r as u64).max(1))
}

/// Checks the frequency view of cumulative activation on a small graph:
/// over `diffusions` independent cascades, `X_u / N >= tau` should hold when
/// `P_u(S) > tau` and `X_u / N <= tau` when `P_u(S) < tau`. Returns whether
/// the predicted event occurred. The boundary `P_u(S) = tau` is rejected.
pub fn frequency_check(
    graph: &Graph,
    seeds: &[NodeId],
    u: NodeId,
    tau: f64,
    diffusions: u64,
    seed: u64,
) -> Result<bool> {
    let exact = oracle::exact_activation_probs(graph, seeds)?.get(u);
    if (exact - tau).abs() <= oracle::THRESHOLD_GUARD {
        return Err(Error::InvalidParameter(format!("threshold {tau} equals P_u(S); the boundary is excluded")));
    }
    let counts = activation_counts(graph, seeds, diffusions, &Substreams::new(seed, Domain::Cascade))?;
    let freq = counts.probability(u);
    Ok(if exact > tau { freq >= tau } else { freq <= tau })
}
