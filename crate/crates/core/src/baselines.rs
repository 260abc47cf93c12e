//! Comparison seed rankers: RR-set coverage greedy, out-degree, weighted
//! PageRank on the reversed graph, and uniform random order.

use std::collections::BinaryHeap;
use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{Domain, Substreams};
use crate::rrset::RRIndex;

pub const DEFAULT_RESTART: f64 = 0.15;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const MAX_PAGERANK_ITERATIONS: usize = 10_000;

/// A total order over all nodes, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub order: Vec<NodeId>,
    /// Score per node id, when the ranker has one.
    pub scores: Option<Vec<f64>>,
}

impl Ranking {
    /// Orders nodes by descending score, ties by smaller id.
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let mut order: Vec<NodeId> = (0..scores.len() as NodeId).collect();
        order.sort_by(|&a, &b| scores[b as usize].total_cmp(&scores[a as usize]).then(a.cmp(&b)));
        Ranking { order, scores: Some(scores) }
    }

    pub fn prefix(&self, k: usize) -> &[NodeId] {
        &self.order[..k.min(self.order.len())]
    }

    /// `rank node score` lines, ranks from 1; `-` stands for a missing score.
    pub fn write<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        for (i, &v) in self.order.iter().enumerate() {
            match &self.scores {
                Some(s) => writeln!(out, "{} {} {}", i + 1, graph.label(v), s[v as usize])?,
                None => writeln!(out, "{} {} -", i + 1, graph.label(v))?,
            }
        }
        Ok(())
    }
}

/// Coverage greedy over the pooled live RR sets of every target: each step
/// takes the node in the most live sets (smallest id on ties) and removes
/// the sets it hits. Works on a private copy of `index`.
pub fn coverage_greedy(index: &RRIndex, k: usize) -> Result<Vec<NodeId>> {
    coverage_greedy_among(index, k, None)
}

/// [`coverage_greedy`] restricted to nodes with `allowed[v]`.
pub fn coverage_greedy_among(index: &RRIndex, k: usize, allowed: Option<&[bool]>) -> Result<Vec<NodeId>> {
    let n = index.node_count();
    let pool: Vec<NodeId> = (0..n as NodeId).filter(|&v| allowed.is_none_or(|a| a[v as usize])).collect();
    if k > pool.len() {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds the {} candidate seeds", pool.len())));
    }
    let mut index = index.clone();
    // Pooled counts only shrink, so a stale heap entry is an upper bound.
    let mut heap: BinaryHeap<(usize, std::cmp::Reverse<NodeId>)> =
        pool.into_iter().map(|v| (index.pooled_count(v), std::cmp::Reverse(v))).collect();
    let mut picked = Vec::with_capacity(k);
    while picked.len() < k {
        let (stored, std::cmp::Reverse(v)) = heap.pop().expect("k <= n keeps the heap nonempty");
        let fresh = index.pooled_count(v);
        if fresh < stored {
            heap.push((fresh, std::cmp::Reverse(v)));
            continue;
        }
        index.remove_hit_sets(v);
        picked.push(v);
    }
    Ok(picked)
}

/// PageRank on the reversed graph: from `v` the walk moves to an
/// in-neighbour `u` with probability `p(u,v) / sum_w p(w,v)`, and restarts
/// uniformly with probability `restart`. Nodes without weighted in-arcs
/// spread their mass uniformly. Iterates until successive vectors differ by
/// at most `tol` in L1 norm.
pub fn pagerank(graph: &Graph, restart: f64, tol: f64) -> Result<Ranking> {
    if !(restart > 0.0 && restart < 1.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("need restart in (0,1) and tol > 0 (got {restart}, {tol})")));
    }
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let in_weight: Vec<f64> = (0..n as NodeId).map(|v| graph.in_edges(v).map(|(_, p)| p).sum()).collect();
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_PAGERANK_ITERATIONS {
        let dangling: f64 = (0..n).filter(|&v| in_weight[v] <= 0.0).map(|v| x[v]).sum();
        let base = restart * uniform + (1.0 - restart) * dangling * uniform;
        next.par_iter_mut().enumerate().for_each(|(u, slot)| {
            let pulled: f64 = graph
                .out_edges(u as NodeId)
                .filter(|&(v, _)| in_weight[v as usize] > 0.0)
                .map(|(v, p)| x[v as usize] * p / in_weight[v as usize])
                .sum();
            *slot = base + (1.0 - restart) * pulled;
        });
        let delta: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if delta <= tol {
            return Ok(Ranking::from_scores(x));
        }
    }
    let delta = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
    Err(Error::NoConvergence { iterations: MAX_PAGERANK_ITERATIONS, delta })
}

/// Descending out-degree, ties by smaller id.
pub fn rank_by_degree(graph: &Graph) -> Ranking {
    Ranking::from_scores((0..graph.node_count() as NodeId).map(|u| graph.out_degree(u) as f64).collect())
}

/// Uniformly random order, a pure function of `seed`.
pub fn random_ranking(graph: &Graph, seed: u64) -> Ranking {
    let mut order: Vec<NodeId> = (0..graph.node_count() as NodeId).collect();
    order.shuffle(&mut Substreams::new(seed, Domain::Ranking).stream(0));
    Ranking { order, scores: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{TargetSet, Thresholds};
    use crate::rrset::build_index;

    fn is_permutation(order: &[NodeId], n: usize) -> bool {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        sorted == (0..n as NodeId).collect::<Vec<_>>()
    }

    #[test]
    fn coverage_on_star() {
        let g = fixtures::star();
        let index = build_index(&g, &TargetSet::all(4), &Thresholds::uniform(4, 1.0).unwrap(), 4, 0).unwrap();
        let a = g.node("a").unwrap();
        assert_eq!(index.pooled_count(a), 12);
        assert_eq!(index.pooled_count(g.node("b").unwrap()), 8);
        assert_eq!(coverage_greedy(&index, 1).unwrap(), vec![a]);
        assert_eq!(coverage_greedy(&index, 2).unwrap(), g.nodes(["a", "b"]).unwrap());
        let all = coverage_greedy(&index, 4).unwrap();
        assert!(is_permutation(&all, 4));
        assert!(coverage_greedy(&index, 5).is_err());
    }

    #[test]
    fn coverage_single_node() {
        let g = Graph::from_edges(2, &[(0, 1, 0.5)]).unwrap();
        let index = build_index(&g, &TargetSet::from_nodes(2, [0]).unwrap(), &Thresholds::uniform(2, 0.5).unwrap(), 8, 1)
            .unwrap();
        assert_eq!(coverage_greedy(&index, 1).unwrap(), vec![0]);
    }

    #[test]
    fn pagerank_symmetric_cycle() {
        let g = Graph::from_edges(2, &[(0, 1, 0.3), (1, 0, 0.3)]).unwrap();
        let r = pagerank(&g, DEFAULT_RESTART, 1e-12).unwrap();
        let s = r.scores.unwrap();
        assert!((s[0] - 0.5).abs() < 1e-9 && (s[1] - 0.5).abs() < 1e-9);
        assert_eq!(r.order, vec![0, 1]);
    }

    #[test]
    fn pagerank_sums_to_one_and_respects_symmetry() {
        let g = fixtures::fan_in3();
        let s = pagerank(&g, DEFAULT_RESTART, 1e-10).unwrap().scores.unwrap();
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let [a, b, c, u] = ["a", "b", "c", "u"].map(|l| g.node(l).unwrap() as usize);
        assert!((s[a] - s[b]).abs() < 1e-12 && (s[a] - s[c]).abs() < 1e-12);
        assert!(s[a] > s[u]);
    }

    #[test]
    fn pagerank_ignores_uniform_scaling() {
        let g = fixtures::star();
        let half = g.with_probabilities(&vec![0.5; g.edge_count()]).unwrap();
        let full = pagerank(&g, DEFAULT_RESTART, 1e-10).unwrap();
        let scaled = pagerank(&half, DEFAULT_RESTART, 1e-10).unwrap();
        assert_eq!(full.order, scaled.order);
        for (x, y) in full.scores.unwrap().iter().zip(scaled.scores.unwrap()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn pagerank_rejects_bad_parameters() {
        let g = fixtures::star();
        assert!(pagerank(&g, 0.0, 1e-4).is_err());
        assert!(pagerank(&g, 0.15, 0.0).is_err());
    }

    #[test]
    fn degree_orders() {
        let star = fixtures::star();
        assert_eq!(rank_by_degree(&star).order[0], star.node("a").unwrap());
        let fan = fixtures::fan_in3();
        let order = rank_by_degree(&fan).order;
        assert_eq!(*order.last().unwrap(), fan.node("u").unwrap());
        let ring = Graph::from_edges(4, &[(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5), (3, 0, 0.5)]).unwrap();
        assert_eq!(rank_by_degree(&ring).order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn random_is_reproducible_and_uniform() {
        let g = Graph::from_edges(4, &[(0, 1, 0.5)]).unwrap();
        assert_eq!(random_ranking(&g, 3), random_ranking(&g, 3));
        assert!(is_permutation(&random_ranking(&g, 3).order, 4));
        let mut first = [0usize; 4];
        for seed in 0..10_000 {
            first[random_ranking(&g, seed).order[0] as usize] += 1;
        }
        for count in first {
            assert!((count as f64 / 10_000.0 - 0.25).abs() <= 0.02, "{first:?}");
        }
        let single = Graph::from_arcs(vec!["x".into()], &[], true).unwrap();
        assert_eq!(random_ranking(&single, 0).order, vec![0]);
    }

    #[test]
    fn ranking_serialization() {
        let g = fixtures::star();
        let mut out = Vec::new();
        rank_by_degree(&g).write(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().next().unwrap(), "1 a 2");
        let mut out = Vec::new();
        random_ranking(&g, 0).write(&g, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().lines().all(|l| l.ends_with(" -")));
    }
}
