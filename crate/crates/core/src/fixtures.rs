//! Small hand-checkable graphs used throughout the tests and examples.
//!
//! * `fan_in3`: `a -> u`, `b -> u`, `c -> u`, each with probability 1/2.
//! * `chain2`: `v -> u` with probability 1.
//! * `star`: `a -> x`, `a -> y`, `b -> y`, all with probability 1.

use crate::graph::{load_edge_list, Graph, Thresholds};

pub const FAN_IN3: &str = include_str!("../fixtures/fan_in3.txt");
pub const CHAIN2: &str = include_str!("../fixtures/chain2.txt");
pub const STAR: &str = include_str!("../fixtures/star.txt");

fn load(text: &str) -> Graph {
    load_edge_list(text.as_bytes(), true).expect("bundled fixture parses")
}

pub fn fan_in3() -> Graph {
    load(FAN_IN3)
}

pub fn chain2() -> Graph {
    load(CHAIN2)
}

pub fn star() -> Graph {
    load(STAR)
}

/// Thresholds on `fan_in3` where `u` needs 7/8 and the sources need 1.
pub fn fan_in3_thresholds(graph: &Graph) -> Thresholds {
    let mut tau = vec![1.0; graph.node_count()];
    tau[graph.node("u").expect("fan_in3 has u") as usize] = 7.0 / 8.0;
    Thresholds::from_values(tau)
}
