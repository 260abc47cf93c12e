//! Problem instances shared by the solvers, the exhaustive oracle and the
//! experiment driver.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{validate, Graph, NodeId, TargetSet, Thresholds};

pub const DEFAULT_THETA: u32 = 1000;
/// Balance parameter used for influence maximization.
pub const DEFAULT_C_IM: f64 = 1.7;
/// Balance parameter used for seed minimization, which picks many seeds.
pub const DEFAULT_C_SM: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Maximize the number of cumulatively active targets with `k` seeds.
    InfluenceMax { k: usize },
    /// Fewest seeds with at least `eta` cumulatively active targets.
    SeedMin { eta: usize },
}

/// Per-step seed selection rule of the RR-set greedy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Largest marginal gain of `sum_u min(P_u, c * tau_u)`.
    BalancedTruncation { c: f64 },
    /// Most targets pushed over their threshold, ties by truncated coverage.
    ActivationDominance,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::BalancedTruncation { .. } => "btg",
            Strategy::ActivationDominance => "adg",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// `adg`, `btg` (balance parameter 1.7) or `btg:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adg" => Ok(Strategy::ActivationDominance),
            "btg" => Ok(Strategy::BalancedTruncation { c: DEFAULT_C_IM }),
            _ => match s.strip_prefix("btg:") {
                Some(c) => c
                    .parse()
                    .map(|c| Strategy::BalancedTruncation { c })
                    .map_err(|_| Error::InvalidParameter(format!("bad balance parameter in '{s}'"))),
                None => Err(Error::InvalidParameter(format!("unknown strategy '{s}'"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub target: TargetSet,
    pub thresholds: Thresholds,
    pub strategy: Strategy,
    /// RR sets generated per target node.
    pub theta: u32,
    /// Master seed for every random stream the solver uses.
    pub seed: u64,
    /// Nodes allowed as seeds; `None` means every node.
    pub candidates: Option<Vec<NodeId>>,
    /// Byte budget for the RR index.
    pub memory_cap: Option<u64>,
}

impl ProblemSpec {
    pub fn im_ca(k: usize, target: TargetSet, thresholds: Thresholds) -> Self {
        ProblemSpec {
            kind: ProblemKind::InfluenceMax { k },
            target,
            thresholds,
            strategy: Strategy::BalancedTruncation { c: DEFAULT_C_IM },
            theta: DEFAULT_THETA,
            seed: 0,
            candidates: None,
            memory_cap: None,
        }
    }

    pub fn sm_ca(eta: usize, target: TargetSet, thresholds: Thresholds) -> Self {
        ProblemSpec {
            kind: ProblemKind::SeedMin { eta },
            strategy: Strategy::BalancedTruncation { c: DEFAULT_C_SM },
            ..Self::im_ca(1, target, thresholds)
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_theta(mut self, theta: u32) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_candidates(mut self, candidates: Vec<NodeId>) -> Self {
        self.candidates = Some(candidates);
        self
    }

    pub fn with_memory_cap(mut self, bytes: u64) -> Self {
        self.memory_cap = Some(bytes);
        self
    }

    /// Membership mask of the allowed seeds.
    pub fn candidate_mask(&self, n: usize) -> Vec<bool> {
        match &self.candidates {
            None => vec![true; n],
            Some(list) => {
                let mut mask = vec![false; n];
                for &v in list {
                    if let Some(slot) = mask.get_mut(v as usize) {
                        *slot = true;
                    }
                }
                mask
            }
        }
    }

    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let n = graph.node_count();
        let report = validate(graph, &self.thresholds, &self.target);
        if !report.is_valid() {
            return Err(Error::InvalidParameter(report.violations.join("; ")));
        }
        let pool = match &self.candidates {
            None => n,
            Some(list) => {
                if let Some(&bad) = list.iter().find(|&&v| v as usize >= n) {
                    return Err(Error::InvalidParameter(format!("candidate {bad} out of range 0..{n}")));
                }
                self.candidate_mask(n).iter().filter(|&&b| b).count()
            }
        };
        match self.kind {
            ProblemKind::InfluenceMax { k } => {
                if k == 0 || k > pool {
                    return Err(Error::InvalidParameter(format!("k = {k} must be in 1..={pool}")));
                }
            }
            ProblemKind::SeedMin { eta } => {
                if eta == 0 || eta > self.target.len() {
                    return Err(Error::InvalidParameter(format!(
                        "eta = {eta} must be in 1..={}",
                        self.target.len()
                    )));
                }
            }
        }
        if let Strategy::BalancedTruncation { c } = self.strategy {
            if !(c >= 1.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!("balance parameter c = {c} must be >= 1")));
            }
        }
        if self.theta == 0 {
            return Err(Error::InvalidParameter("theta must be at least 1".to_string()));
        }
        Ok(())
    }
}
