//! Exact ground truth on small graphs by enumerating every live-edge
//! subgraph, plus an exhaustive search for optimal seed sets.
//!
//! A live-edge subgraph keeps each arc independently with its probability.
//! A node is active in one cascade from `S` exactly when some seed reaches
//! it in the sampled subgraph, so weighting every subgraph by
//! `prod p * prod (1 - p)` yields the exact activation probabilities.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, TargetSet, Thresholds};
use crate::problem::{ProblemKind, ProblemSpec};

/// Largest arc count enumerated by default (2^20 subgraphs).
pub const DEFAULT_EDGE_CAP: usize = 20;
/// `P_u >= tau_u - THRESHOLD_GUARD` counts as cumulatively active.
pub const THRESHOLD_GUARD: f64 = 1e-9;
/// Node limit of [`LiveEdgeTable`] (reacher sets are `u64` masks).
pub const TABLE_NODE_CAP: usize = 64;
/// Limits of [`brute_force_optimal`].
pub const BRUTE_FORCE_NODE_CAP: usize = 12;

/// Exact activation probabilities for one seed set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactProbs {
    pub seeds: Vec<NodeId>,
    pub probs: Vec<f64>,
    /// Sum of all enumerated subgraph weights; 1 up to rounding.
    pub total_weight: f64,
}

impl ExactProbs {
    pub fn get(&self, u: NodeId) -> f64 {
        self.probs[u as usize]
    }

    /// `|{u in U : P_u >= tau_u}|` with the guard band.
    pub fn rho(&self, thresholds: &Thresholds, target: &TargetSet) -> usize {
        rho_from(&self.probs, thresholds, target)
    }

    /// `sum_{u in U} min(P_u, c * tau_u)`; every node when `target` is `None`.
    pub fn truncated_sum(&self, thresholds: &Thresholds, c: f64, target: Option<&TargetSet>) -> f64 {
        truncated_from(&self.probs, thresholds, c, target)
    }
}

fn rho_from(probs: &[f64], thresholds: &Thresholds, target: &TargetSet) -> usize {
    target
        .members()
        .iter()
        .filter(|&&u| probs[u as usize] >= thresholds.get(u) - THRESHOLD_GUARD)
        .count()
}

fn truncated_from(probs: &[f64], thresholds: &Thresholds, c: f64, target: Option<&TargetSet>) -> f64 {
    let term = |u: NodeId| probs[u as usize].min(c * thresholds.get(u));
    match target {
        Some(t) => t.members().iter().map(|&u| term(u)).sum(),
        None => (0..probs.len() as NodeId).map(term).sum(),
    }
}

fn check_edges(graph: &Graph, cap: usize) -> Result<()> {
    if graph.edge_count() > cap {
        return Err(Error::EdgeCapExceeded { edges: graph.edge_count(), cap });
    }
    Ok(())
}

fn check_seeds(graph: &Graph, seeds: &[NodeId]) -> Result<()> {
    match seeds.iter().find(|&&s| s as usize >= graph.node_count()) {
        Some(s) => Err(Error::InvalidParameter(format!("seed {s} out of range"))),
        None => Ok(()),
    }
}

/// Weight of the live-edge subgraph selected by `mask` (bit `e` = arc `e` kept).
fn subgraph_weight(probs: &[f64], mask: u64) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(e, &p)| if mask >> e & 1 == 1 { p } else { 1.0 - p })
        .product()
}

/// Exact `P_u(S)` for every node, with the default edge cap.
pub fn exact_activation_probs(graph: &Graph, seeds: &[NodeId]) -> Result<ExactProbs> {
    exact_activation_probs_capped(graph, seeds, DEFAULT_EDGE_CAP)
}

pub fn exact_activation_probs_capped(graph: &Graph, seeds: &[NodeId], cap: usize) -> Result<ExactProbs> {
    check_edges(graph, cap)?;
    check_seeds(graph, seeds)?;
    let n = graph.node_count();
    let arcs: Vec<(NodeId, NodeId, f64)> = graph.arcs().collect();
    let arc_probs: Vec<f64> = arcs.iter().map(|a| a.2).collect();

    // Out-arc index ranges per node, in arcs() order.
    let mut first_arc = vec![0usize; n + 1];
    for &(u, _, _) in &arcs {
        first_arc[u as usize + 1] += 1;
    }
    for i in 0..n {
        first_arc[i + 1] += first_arc[i];
    }

    let mut probs = vec![0.0; n];
    let mut total_weight = 0.0;
    let mut reached = vec![false; n];
    let mut queue: Vec<NodeId> = Vec::with_capacity(n);

    for mask in 0..1u64 << arcs.len() {
        let w = subgraph_weight(&arc_probs, mask);
        total_weight += w;
        if w == 0.0 || seeds.is_empty() {
            continue;
        }
        reached.iter_mut().for_each(|r| *r = false);
        queue.clear();
        for &s in seeds {
            if !reached[s as usize] {
                reached[s as usize] = true;
                queue.push(s);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head] as usize;
            head += 1;
            for e in first_arc[x]..first_arc[x + 1] {
                let y = arcs[e].1 as usize;
                if mask >> e & 1 == 1 && !reached[y] {
                    reached[y] = true;
                    queue.push(y as NodeId);
                }
            }
        }
        for &x in &queue {
            probs[x as usize] += w;
        }
    }

    Ok(ExactProbs { seeds: seeds.to_vec(), probs, total_weight })
}

/// Exact `rho_U(S)`: targets whose activation probability meets their threshold.
pub fn exact_rho(graph: &Graph, seeds: &[NodeId], thresholds: &Thresholds, target: &TargetSet) -> Result<usize> {
    Ok(exact_activation_probs(graph, seeds)?.rho(thresholds, target))
}

/// Exact `sum_{u in V} min(P_u(S), c * tau_u)`. With `c = 1` this is the
/// truncated surrogate; with all thresholds 1 it is the expected spread.
pub fn exact_truncated_sum(graph: &Graph, seeds: &[NodeId], thresholds: &Thresholds, c: f64) -> Result<f64> {
    if !(c >= 1.0) {
        return Err(Error::InvalidParameter(format!("multiplier c = {c} must be >= 1")));
    }
    Ok(exact_activation_probs(graph, seeds)?.truncated_sum(thresholds, c, None))
}

/// Bit mask of a node set, for graphs with at most 64 nodes.
pub fn node_mask(nodes: &[NodeId]) -> u64 {
    nodes.iter().fold(0u64, |m, &v| m | 1u64 << v)
}

/// Node ids set in `mask`, increasing.
pub fn mask_nodes(mask: u64) -> Vec<NodeId> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Precomputed live-edge distribution answering exact queries for many
/// seed sets. For every node it stores the distribution of the set of
/// nodes that reach it, so `P_u(S)` is the mass of reacher sets meeting `S`.
#[derive(Debug, Clone)]
pub struct LiveEdgeTable {
    n: usize,
    reachers: Vec<Vec<(u64, f64)>>,
    total_weight: f64,
}

impl LiveEdgeTable {
    pub fn new(graph: &Graph) -> Result<Self> {
        Self::with_cap(graph, DEFAULT_EDGE_CAP)
    }

    pub fn with_cap(graph: &Graph, cap: usize) -> Result<Self> {
        check_edges(graph, cap)?;
        let n = graph.node_count();
        if n > TABLE_NODE_CAP {
            return Err(Error::InvalidParameter(format!("{n} nodes exceeds the table cap {TABLE_NODE_CAP}")));
        }
        let arcs: Vec<(NodeId, NodeId, f64)> = graph.arcs().collect();
        let arc_probs: Vec<f64> = arcs.iter().map(|a| a.2).collect();

        let mut acc: Vec<HashMap<u64, f64>> = vec![HashMap::new(); n];
        let mut total_weight = 0.0;
        let mut closure = vec![0u64; n];
        for mask in 0..1u64 << arcs.len() {
            let w = subgraph_weight(&arc_probs, mask);
            total_weight += w;
            if w == 0.0 {
                continue;
            }
            // closure[i] = nodes that reach i.
            for (i, c) in closure.iter_mut().enumerate() {
                *c = 1u64 << i;
            }
            for (e, &(u, v, _)) in arcs.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    closure[v as usize] |= 1u64 << u;
                }
            }
            for k in 0..n {
                let via = closure[k];
                for c in closure.iter_mut() {
                    if *c >> k & 1 == 1 {
                        *c |= via;
                    }
                }
            }
            for (u, &c) in closure.iter().enumerate() {
                *acc[u].entry(c).or_insert(0.0) += w;
            }
        }

        let reachers = acc
            .into_iter()
            .map(|m| {
                let mut v: Vec<(u64, f64)> = m.into_iter().collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect();
        Ok(LiveEdgeTable { n, reachers, total_weight })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Exact `P_u(S)` for the seed set given as a bit mask.
    pub fn prob(&self, u: NodeId, seeds: u64) -> f64 {
        self.reachers[u as usize].iter().filter(|(m, _)| m & seeds != 0).map(|e| e.1).sum()
    }

    pub fn probs(&self, seeds: u64) -> Vec<f64> {
        (0..self.n as NodeId).map(|u| self.prob(u, seeds)).collect()
    }

    pub fn rho(&self, seeds: u64, thresholds: &Thresholds, target: &TargetSet) -> usize {
        rho_from(&self.probs(seeds), thresholds, target)
    }

    pub fn truncated_sum(&self, seeds: u64, thresholds: &Thresholds, c: f64, target: Option<&TargetSet>) -> f64 {
        truncated_from(&self.probs(seeds), thresholds, c, target)
    }
}

/// Result of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Optimal { seeds: Vec<NodeId>, rho: usize },
    /// Even every candidate together misses the coverage requirement.
    Infeasible { best_rho: usize },
}

/// Reference optimum by exhaustive search over candidate seed sets, by
/// size and then lexicographically, so ties resolve to the
/// lexicographically smallest set. Needs `n <= 12` and `m <= 20`.
pub fn brute_force_optimal(graph: &Graph, problem: &ProblemSpec) -> Result<BruteForceOutcome> {
    let n = graph.node_count();
    if n > BRUTE_FORCE_NODE_CAP {
        return Err(Error::InvalidParameter(format!("{n} nodes exceeds the brute-force cap {BRUTE_FORCE_NODE_CAP}")));
    }
    problem.validate(graph)?;
    let table = LiveEdgeTable::new(graph)?;
    let mask = problem.candidate_mask(n);
    let pool: Vec<NodeId> = (0..n as NodeId).filter(|&v| mask[v as usize]).collect();
    let rho = |set: &[NodeId]| table.rho(node_mask(set), &problem.thresholds, &problem.target);

    match problem.kind {
        ProblemKind::InfluenceMax { k } => {
            let mut best: Option<(Vec<NodeId>, usize)> = None;
            for set in pool.iter().copied().combinations(k) {
                let r = rho(&set);
                if best.as_ref().is_none_or(|b| r > b.1) {
                    best = Some((set, r));
                }
            }
            let (seeds, rho) = best.expect("k <= pool size was validated");
            Ok(BruteForceOutcome::Optimal { seeds, rho })
        }
        ProblemKind::SeedMin { eta } => {
            for size in 1..=pool.len() {
                for set in pool.iter().copied().combinations(size) {
                    let r = rho(&set);
                    if r >= eta {
                        return Ok(BruteForceOutcome::Optimal { seeds: set, rho: r });
                    }
                }
            }
            Ok(BruteForceOutcome::Infeasible { best_rho: rho(&pool) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(g: &Graph, labels: &[&str]) -> Vec<NodeId> {
        g.nodes(labels.iter().copied()).unwrap()
    }

    #[test]
    fn fan_in_probabilities() {
        let g = fixtures::fan_in3();
        let u = g.node("u").unwrap();
        let all = exact_activation_probs(&g, &ids(&g, &["a", "b", "c"])).unwrap();
        assert!((all.get(u) - 7.0 / 8.0).abs() < 1e-15);
        assert!((all.total_weight - 1.0).abs() < 1e-12);
        let one = exact_activation_probs(&g, &ids(&g, &["a"])).unwrap();
        assert_eq!(one.get(u), 0.5);
        assert_eq!(one.get(g.node("a").unwrap()), 1.0);
    }

    #[test]
    fn empty_seed_set_activates_nothing() {
        let g = fixtures::fan_in3();
        let p = exact_activation_probs(&g, &[]).unwrap();
        assert!(p.probs.iter().all(|&x| x == 0.0));
        let t = Thresholds::uniform(4, 1.0).unwrap();
        assert_eq!(exact_rho(&g, &[], &t, &TargetSet::all(4)).unwrap(), 0);
        assert_eq!(exact_truncated_sum(&g, &[], &t, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn chain_is_deterministic() {
        let g = fixtures::chain2();
        let p = exact_activation_probs(&g, &ids(&g, &["v"])).unwrap();
        assert_eq!(p.get(g.node("u").unwrap()), 1.0);
    }

    #[test]
    fn example_one_rho() {
        let g = fixtures::fan_in3();
        let t = fixtures::fan_in3_thresholds(&g);
        let target = TargetSet::from_nodes(4, ids(&g, &["u"])).unwrap();
        let rho = |l: &[&str]| exact_rho(&g, &ids(&g, l), &t, &target).unwrap();
        assert_eq!(rho(&["a"]), 0);
        assert_eq!(rho(&["a", "b"]), 0);
        assert_eq!(rho(&["a", "b", "c"]), 1);
        assert_eq!(rho(&[]), 0);
    }

    #[test]
    fn star_is_fully_reached() {
        let g = fixtures::star();
        let t = Thresholds::uniform(4, 1.0).unwrap();
        assert_eq!(exact_rho(&g, &ids(&g, &["a", "b"]), &t, &TargetSet::all(4)).unwrap(), 4);
        assert_eq!(exact_truncated_sum(&g, &ids(&g, &["a"]), &t, 1.0).unwrap(), 3.0);
    }

    #[test]
    fn truncated_sum_on_fan_in() {
        let g = fixtures::fan_in3();
        let t = fixtures::fan_in3_thresholds(&g);
        assert_eq!(exact_truncated_sum(&g, &ids(&g, &["a"]), &t, 1.0).unwrap(), 1.5);
        assert!(exact_truncated_sum(&g, &[], &t, 0.5).is_err());
    }

    #[test]
    fn edge_cap_is_enforced() {
        let arcs: Vec<_> = (0..21u32).map(|i| (i, i + 1, 0.5)).collect();
        let g = Graph::from_edges(22, &arcs).unwrap();
        assert!(matches!(exact_activation_probs(&g, &[0]), Err(Error::EdgeCapExceeded { edges: 21, cap: 20 })));
        assert!(LiveEdgeTable::new(&g).is_err());
    }

    #[test]
    fn table_agrees_with_direct_enumeration() {
        let g = Graph::from_edges(4, &[(0, 1, 0.3), (1, 2, 0.6), (2, 0, 0.2), (0, 3, 0.9), (3, 2, 0.5)]).unwrap();
        let table = LiveEdgeTable::new(&g).unwrap();
        assert!((table.total_weight() - 1.0).abs() < 1e-12);
        for s in 0..16u64 {
            let direct = exact_activation_probs(&g, &mask_nodes(s)).unwrap();
            for u in 0..4 {
                assert!((table.prob(u, s) - direct.get(u)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn brute_force_fan_in() {
        let g = fixtures::fan_in3();
        let t = fixtures::fan_in3_thresholds(&g);
        let target = TargetSet::from_nodes(4, ids(&g, &["u"])).unwrap();
        let spec = ProblemSpec::sm_ca(1, target, t);
        // Seeding u itself activates it.
        assert_eq!(
            brute_force_optimal(&g, &spec).unwrap(),
            BruteForceOutcome::Optimal { seeds: ids(&g, &["u"]), rho: 1 }
        );
        let sources = spec.with_candidates(ids(&g, &["a", "b", "c"]));
        assert_eq!(
            brute_force_optimal(&g, &sources).unwrap(),
            BruteForceOutcome::Optimal { seeds: ids(&g, &["a", "b", "c"]), rho: 1 }
        );
    }

    #[test]
    fn brute_force_star_and_full_budget() {
        let g = fixtures::star();
        let t = Thresholds::uniform(4, 1.0).unwrap();
        let spec = ProblemSpec::im_ca(1, TargetSet::all(4), t.clone());
        assert_eq!(
            brute_force_optimal(&g, &spec).unwrap(),
            BruteForceOutcome::Optimal { seeds: ids(&g, &["a"]), rho: 3 }
        );
        let spec = ProblemSpec::im_ca(4, TargetSet::all(4), t);
        assert!(matches!(brute_force_optimal(&g, &spec).unwrap(), BruteForceOutcome::Optimal { rho: 4, .. }));
    }

    #[test]
    fn brute_force_reports_infeasible() {
        let g = fixtures::fan_in3();
        let t = Thresholds::uniform(4, 1.0).unwrap();
        let u = g.node("u").unwrap();
        let target = TargetSet::from_nodes(4, [u]).unwrap();
        let spec = ProblemSpec::sm_ca(1, target, t).with_candidates(ids(&g, &["a", "b"]));
        assert_eq!(brute_force_optimal(&g, &spec).unwrap(), BruteForceOutcome::Infeasible { best_rho: 0 });
    }
}
