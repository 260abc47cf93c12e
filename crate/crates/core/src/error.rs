use std::io;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { line: usize, value: f64 },

    #[error("line {line}: duplicate arc {source_label} -> {target_label}")]
    DuplicateArc {
        line: usize,
        source_label: String,
        target_label: String,
    },

    #[error("line {line}: self-loop on {label}")]
    SelfLoop { line: usize, label: String },

    #[error("empty input: no edges")]
    EmptyInput,

    #[error("unknown node '{0}'")]
    UnknownNode(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge count {edges} exceeds enumeration cap {cap}")]
    EdgeCapExceeded { edges: usize, cap: usize },

    #[error("RR index needs about {estimated} bytes, over the budget of {cap} bytes")]
    MemoryBudgetExceeded { estimated: u64, cap: u64 },

    #[error("infeasible: estimated {achieved} cumulatively active nodes, {required} required")]
    Infeasible { achieved: usize, required: usize },

    #[error("pagerank did not converge after {iterations} iterations (last L1 change {delta})")]
    NoConvergence { iterations: usize, delta: f64 },

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// True for errors caused by bad input or parameters, as opposed to
    /// I/O failures or infeasible instances.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Infeasible { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
