//! Seed minimization and influence maximization under cumulative activation.

pub mod baselines;
pub mod cascade;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod problem;
pub mod rng;
pub mod rrset;
pub mod solvers;
pub mod synthetic;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId, TargetSet, Thresholds};
