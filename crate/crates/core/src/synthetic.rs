//! Random graph generators for tests, examples and desk-scale benchmarks.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{Domain, Substreams};

/// Directed graph on `n` nodes with `round(n * avg_out_degree)` distinct
/// arcs whose endpoints are drawn uniformly. Arcs carry probability 1;
/// assign real ones with [`crate::graph::assign_probabilities`].
pub fn random_directed(n: usize, avg_out_degree: f64, seed: u64) -> Result<Graph> {
    let m = (n as f64 * avg_out_degree).round() as usize;
    random_arcs(n, m, (1.0, 1.0), seed)
}

/// Directed graph on `n` nodes with `m` distinct arcs, each probability
/// uniform in `[lo, hi]`.
pub fn random_small(n: usize, m: usize, lo: f64, hi: f64, seed: u64) -> Result<Graph> {
    random_arcs(n, m, (lo, hi), seed)
}

fn random_arcs(n: usize, m: usize, (lo, hi): (f64, f64), seed: u64) -> Result<Graph> {
    if n < 2 && m > 0 {
        return Err(Error::InvalidParameter("arcs need at least two nodes".to_string()));
    }
    if m as u128 > n as u128 * n.saturating_sub(1) as u128 {
        return Err(Error::InvalidParameter(format!("{m} arcs do not fit on {n} nodes")));
    }
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::InvalidParameter(format!("bad probability range [{lo}, {hi}]")));
    }
    let mut rng = Substreams::new(seed, Domain::Synthetic).stream(0);
    let mut seen = HashSet::with_capacity(m);
    let mut arcs = Vec::with_capacity(m);
    while arcs.len() < m {
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u != v && seen.insert((u, v)) {
            let p = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
            arcs.push((u, v, p));
        }
    }
    Graph::from_edges(n, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_ranges() {
        let g = random_small(8, 12, 0.1, 0.9, 4).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (8, 12));
        assert!(g.arcs().all(|(u, v, p)| u != v && (0.1..=0.9).contains(&p)));
        assert_eq!(g, random_small(8, 12, 0.1, 0.9, 4).unwrap());

        let big = random_directed(1000, 6.0, 1).unwrap();
        assert_eq!(big.edge_count(), 6000);
    }

    #[test]
    fn rejects_impossible_requests() {
        assert!(random_small(3, 7, 0.1, 0.9, 0).is_err());
        assert!(random_small(3, 2, 0.9, 0.1, 0).is_err());
        assert!(random_small(3, 6, 0.5, 0.5, 0).is_ok());
    }
}
