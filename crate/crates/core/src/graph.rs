//! Directed influence graphs, thresholds, target sets and the edge-list
//! format they are loaded from.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{Domain, Substreams};

/// Dense node identifier in `0..n`.
pub type NodeId = u32;

/// Directed graph with per-arc activation probabilities, stored as paired
/// out- and in-adjacency arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    directed: bool,
    weighted: bool,
    pub(crate) out_offsets: Vec<usize>,
    pub(crate) out_targets: Vec<NodeId>,
    pub(crate) out_probs: Vec<f64>,
    pub(crate) in_offsets: Vec<usize>,
    pub(crate) in_sources: Vec<NodeId>,
    pub(crate) in_probs: Vec<f64>,
}

impl Graph {
    /// Builds a graph from arcs over `labels.len()` nodes. Arcs keep their
    /// relative order within each source node.
    ///
    /// Self-loops, duplicate arcs, out-of-range ids and probabilities outside
    /// `[0, 1]` are rejected.
    pub fn from_arcs(labels: Vec<String>, arcs: &[(NodeId, NodeId, f64)], directed: bool) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashSet::with_capacity(arcs.len());
        for (i, &(u, v, p)) in arcs.iter().enumerate() {
            let line = i + 1;
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!("arc {u} -> {v} references a node outside 0..{n}")));
            }
            if u == v {
                return Err(Error::SelfLoop { line, label: labels[u as usize].clone() });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange { line, value: p });
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateArc {
                    line,
                    source_label: labels[u as usize].clone(),
                    target_label: labels[v as usize].clone(),
                });
            }
        }
        Ok(Self::assemble(labels, arcs, directed, true))
    }

    /// Unlabelled graph over `0..n`; labels are the decimal ids.
    pub fn from_edges(n: usize, arcs: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        Self::from_arcs((0..n).map(|i| i.to_string()).collect(), arcs, true)
    }

    fn assemble(labels: Vec<String>, arcs: &[(NodeId, NodeId, f64)], directed: bool, weighted: bool) -> Self {
        let n = labels.len();
        let m = arcs.len();

        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(u, v, _) in arcs {
            out_offsets[u as usize + 1] += 1;
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }

        let mut out_targets = vec![0; m];
        let mut out_probs = vec![0.0; m];
        let mut cursor = out_offsets.clone();
        for &(u, v, p) in arcs {
            let slot = &mut cursor[u as usize];
            out_targets[*slot] = v;
            out_probs[*slot] = p;
            *slot += 1;
        }

        let mut in_sources = vec![0; m];
        let mut in_probs = vec![0.0; m];
        let mut cursor = in_offsets.clone();
        for u in 0..n {
            for e in out_offsets[u]..out_offsets[u + 1] {
                let v = out_targets[e] as usize;
                let slot = &mut cursor[v];
                in_sources[*slot] = u as NodeId;
                in_probs[*slot] = out_probs[e];
                *slot += 1;
            }
        }

        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i as NodeId)).collect();
        Graph {
            labels,
            index,
            directed,
            weighted,
            out_offsets,
            out_targets,
            out_probs,
            in_offsets,
            in_sources,
            in_probs,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Whether the source carried probabilities for its arcs. Unweighted
    /// graphs hold placeholder probabilities of 1 until
    /// [`assign_probabilities`] runs.
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Dense id of the node with the given original label.
    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// Resolves labels, failing on the first unknown one.
    pub fn nodes<'a, I: IntoIterator<Item = &'a str>>(&self, labels: I) -> Result<Vec<NodeId>> {
        labels
            .into_iter()
            .map(|l| self.node(l).ok_or_else(|| Error::UnknownNode(l.to_string())))
            .collect()
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.out_offsets[u + 1] - self.out_offsets[u]
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Out-neighbours of `u` with arc probabilities.
    pub fn out_edges(&self, u: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        let r = self.out_offsets[u as usize]..self.out_offsets[u as usize + 1];
        self.out_targets[r.clone()].iter().copied().zip(self.out_probs[r].iter().copied())
    }

    /// In-neighbours of `v` with arc probabilities.
    pub fn in_edges(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        let r = self.in_offsets[v as usize]..self.in_offsets[v as usize + 1];
        self.in_sources[r.clone()].iter().copied().zip(self.in_probs[r].iter().copied())
    }

    /// Arc ids (positions in [`Graph::arcs`] order) leaving `u`.
    pub fn out_arc_range(&self, u: NodeId) -> std::ops::Range<usize> {
        self.out_offsets[u as usize]..self.out_offsets[u as usize + 1]
    }

    /// Head and probability of arc `e`.
    pub fn arc(&self, e: usize) -> (NodeId, f64) {
        (self.out_targets[e], self.out_probs[e])
    }

    /// All arcs `(u, v, p)` in out-adjacency order.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |u| self.out_edges(u).map(move |(v, p)| (u, v, p)))
    }

    /// Same topology with new probabilities, given in [`Graph::arcs`] order.
    pub fn with_probabilities(&self, probs: &[f64]) -> Result<Self> {
        if probs.len() != self.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} probabilities, got {}",
                self.edge_count(),
                probs.len()
            )));
        }
        let arcs: Vec<_> = self.arcs().zip(probs).map(|((u, v, _), &p)| (u, v, p)).collect();
        Graph::from_arcs(self.labels.clone(), &arcs, self.directed)
    }

    /// Writes every arc as a `source target probability` line using the
    /// original labels. Undirected graphs are written as their two arcs.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v, p) in self.arcs() {
            writeln!(out, "{} {} {}", self.label(u), self.label(v), p)?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines are `u v` or `u v p`; blank lines and lines starting with `#` are
/// skipped. Node tokens are remapped to dense ids in order of first
/// appearance. Undirected input yields both arcs with the same probability.
/// Either every line carries a probability or none does; unweighted input
/// gets placeholder probabilities of 1.
pub fn load_edge_list<R: BufRead>(source: R, directed: bool) -> Result<Graph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut arcs: Vec<(NodeId, NodeId, f64)> = Vec::new();
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut weighted: Option<bool> = None;

    let mut intern = |tok: &str, labels: &mut Vec<String>| -> NodeId {
        if let Some(&id) = index.get(tok) {
            return id;
        }
        let id = labels.len() as NodeId;
        labels.push(tok.to_string());
        index.insert(tok.to_string(), id);
        id
    };

    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let (p, has_p) = match toks.len() {
            2 => (1.0, false),
            3 => {
                let p: f64 = toks[2].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("cannot parse probability '{}'", toks[2]),
                })?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::ProbabilityOutOfRange { line: line_no, value: p });
                }
                (p, true)
            }
            k => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 'u v' or 'u v p', found {k} fields"),
                })
            }
        };
        match weighted {
            None => weighted = Some(has_p),
            Some(w) if w != has_p => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "mixes weighted and unweighted lines".to_string(),
                })
            }
            _ => {}
        }
        if toks[0] == toks[1] {
            return Err(Error::SelfLoop { line: line_no, label: toks[0].to_string() });
        }
        let u = intern(toks[0], &mut labels);
        let v = intern(toks[1], &mut labels);
        let mut push = |a: NodeId, b: NodeId| -> Result<()> {
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateArc {
                    line: line_no,
                    source_label: labels[a as usize].clone(),
                    target_label: labels[b as usize].clone(),
                });
            }
            arcs.push((a, b, p));
            Ok(())
        };
        push(u, v)?;
        if !directed {
            push(v, u)?;
        }
    }

    if arcs.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Graph::assemble(labels, &arcs, directed, weighted.unwrap_or(true)))
}

/// Per-node activation thresholds, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds(Vec<f64>);

impl Thresholds {
    pub fn uniform(n: usize, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Thresholds(vec![tau; n]))
    }

    /// Wraps raw values without checking them; see [`validate`].
    pub fn from_values(values: Vec<f64>) -> Self {
        Thresholds(values)
    }

    /// Reads `node tau` lines keyed by original labels. Nodes not listed
    /// take `default`, or are an error when no default is given.
    pub fn load<R: BufRead>(source: R, graph: &Graph, default: Option<f64>) -> Result<Self> {
        let mut values: Vec<Option<f64>> = vec![None; graph.node_count()];
        for (i, line) in source.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Parse { line: line_no, message: "expected 'node tau'".to_string() });
            }
            let u = graph.node(toks[0]).ok_or_else(|| Error::UnknownNode(toks[0].to_string()))?;
            let tau: f64 = toks[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse threshold '{}'", toks[1]),
            })?;
            check_tau(tau).map_err(|_| Error::Parse {
                line: line_no,
                message: format!("threshold {tau} must be in (0,1]"),
            })?;
            values[u as usize] = Some(tau);
        }
        if let Some(d) = default {
            check_tau(d)?;
        }
        values
            .into_iter()
            .enumerate()
            .map(|(u, t)| {
                t.or(default)
                    .ok_or_else(|| Error::InvalidParameter(format!("no threshold for node '{}'", graph.label(u as NodeId))))
            })
            .collect::<Result<Vec<_>>>()
            .map(Thresholds)
    }

    pub fn get(&self, u: NodeId) -> f64 {
        self.0[u as usize]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of thresholds over the members of `target`.
    pub fn total_over(&self, target: &TargetSet) -> f64 {
        target.members().iter().map(|&u| self.get(u)).sum()
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("threshold {tau} must be in (0,1]")))
    }
}

/// The nodes whose cumulative activation is counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    mask: Vec<bool>,
    members: Vec<NodeId>,
}

impl TargetSet {
    pub fn all(n: usize) -> Self {
        TargetSet { mask: vec![true; n], members: (0..n as NodeId).collect() }
    }

    /// Target set over `n` nodes. Duplicates collapse; out-of-range ids and
    /// empty sets are rejected.
    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(n: usize, nodes: I) -> Result<Self> {
        let mut mask = vec![false; n];
        for u in nodes {
            if u as usize >= n {
                return Err(Error::InvalidParameter(format!("target node {u} out of range 0..{n}")));
            }
            mask[u as usize] = true;
        }
        let members: Vec<NodeId> = (0..n as NodeId).filter(|&u| mask[u as usize]).collect();
        if members.is_empty() {
            return Err(Error::InvalidParameter("target set is empty".to_string()));
        }
        Ok(TargetSet { mask, members })
    }

    /// Reads one node label per line.
    pub fn load<R: BufRead>(source: R, graph: &Graph) -> Result<Self> {
        let mut nodes = Vec::new();
        for line in source.lines() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            nodes.push(graph.node(trimmed).ok_or_else(|| Error::UnknownNode(trimmed.to_string()))?);
        }
        Self::from_nodes(graph.node_count(), nodes)
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.mask.get(u as usize).copied().unwrap_or(false)
    }

    /// Members in increasing id order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }
}

/// Explicit counts for the weighted-cascade model: `p(u,v) = c(u,v) / d(v)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CascadeCounts {
    /// `d(v)` per node.
    pub per_node: Vec<f64>,
    /// `c(u,v)` per arc; arcs not listed count 1.
    pub per_arc: HashMap<(NodeId, NodeId), f64>,
}

/// How arc probabilities are assigned.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbModel {
    Constant(f64),
    /// `c(u,v)/d(v)`; without counts, `d(v)` is the in-degree and `c = 1`.
    WeightedCascade(Option<CascadeCounts>),
    /// Uniform draw from {0.1, 0.01, 0.001} per arc.
    Trivalency,
}

pub const TRIVALENCY_LEVELS: [f64; 3] = [0.1, 0.01, 0.001];

impl fmt::Display for ProbModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbModel::Constant(p) => write!(f, "constant:{p}"),
            ProbModel::WeightedCascade(_) => f.write_str("weighted-cascade"),
            ProbModel::Trivalency => f.write_str("trivalency"),
        }
    }
}

/// Returns a copy of `graph` whose arcs carry probabilities drawn from `model`.
/// Trivalency draws are a pure function of `rng_seed`.
pub fn assign_probabilities(graph: &Graph, model: &ProbModel, rng_seed: u64) -> Result<Graph> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyInput);
    }
    let probs: Vec<f64> = match model {
        ProbModel::Constant(p) => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(format!("constant probability {p} outside [0,1]")));
            }
            vec![*p; graph.edge_count()]
        }
        ProbModel::WeightedCascade(counts) => {
            let mut probs = Vec::with_capacity(graph.edge_count());
            for (u, v, _) in graph.arcs() {
                let (c, d) = match counts {
                    Some(cc) => {
                        let d = cc.per_node.get(v as usize).copied().ok_or_else(|| {
                            Error::InvalidParameter(format!("no count d(v) for node '{}'", graph.label(v)))
                        })?;
                        (cc.per_arc.get(&(u, v)).copied().unwrap_or(1.0), d)
                    }
                    None => (1.0, graph.in_degree(v) as f64),
                };
                if d <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "d(v) = {d} for node '{}' with incoming arcs",
                        graph.label(v)
                    )));
                }
                let p = c / d;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParameter(format!(
                        "c/d = {p} outside [0,1] on arc {} -> {}",
                        graph.label(u),
                        graph.label(v)
                    )));
                }
                probs.push(p);
            }
            probs
        }
        ProbModel::Trivalency => {
            let mut rng = Substreams::new(rng_seed, Domain::Probabilities).stream(0);
            (0..graph.edge_count()).map(|_| TRIVALENCY_LEVELS[rng.gen_range(0..3)]).collect()
        }
    };
    graph.with_probabilities(&probs)
}

/// Findings from [`validate`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of the inputs.
pub fn validate(graph: &Graph, thresholds: &Thresholds, target: &TargetSet) -> ValidationReport {
    let mut violations = Vec::new();
    let n = graph.node_count();

    for (u, v, p) in graph.arcs() {
        if !(0.0..=1.0).contains(&p) {
            violations.push(format!("probability {p} on arc {u} -> {v} outside [0,1]"));
        }
        if u as usize >= n || v as usize >= n {
            violations.push(format!("arc {u} -> {v} references a node outside 0..{n}"));
        }
    }

    let mut forward: Vec<(NodeId, NodeId, u64)> = graph.arcs().map(|(u, v, p)| (u, v, p.to_bits())).collect();
    let mut backward: Vec<(NodeId, NodeId, u64)> = (0..n as NodeId)
        .flat_map(|v| graph.in_edges(v).map(move |(u, p)| (u, v, p.to_bits())))
        .collect();
    forward.sort_unstable();
    backward.sort_unstable();
    if forward != backward {
        violations.push("in-adjacency is not the transpose of out-adjacency".to_string());
    }

    if thresholds.len() != n {
        violations.push(format!("{} thresholds for {n} nodes", thresholds.len()));
    }
    for (u, &tau) in thresholds.as_slice().iter().enumerate() {
        if !(tau > 0.0 && tau <= 1.0) {
            violations.push(format!("threshold must be in (0,1]: node {u} has {tau}"));
        }
    }

    if target.is_empty() {
        violations.push("target set is empty".to_string());
    }
    if target.universe() != n {
        violations.push(format!("target mask covers {} nodes, graph has {n}", target.universe()));
    }
    for &u in target.members() {
        if u as usize >= n {
            violations.push(format!("target member {u} out of range"));
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, directed: bool) -> Result<Graph> {
        load_edge_list(text.as_bytes(), directed)
    }

    #[test]
    fn single_edge() {
        let g = parse("0 1 1.0", true).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(g.out_edges(0).collect::<Vec<_>>(), vec![(1, 1.0)]);
        assert_eq!(g.in_edges(1).collect::<Vec<_>>(), vec![(0, 1.0)]);
    }

    #[test]
    fn fan_in_remaps_labels() {
        let g = parse("a u 0.5\nb u 0.5\nc u 0.5", true).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let u = g.node("u").unwrap();
        assert_eq!(g.in_degree(u), 3);
        assert!(g.in_edges(u).all(|(_, p)| p == 0.5));
        assert_eq!(g.labels(), &["a", "u", "b", "c"]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("0 1 1.5", true), Err(Error::ProbabilityOutOfRange { line: 1, .. })));
        assert!(matches!(parse("0 1\n1 2 3 4", true), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("0 1 x", true), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("# nothing\n\n", true), Err(Error::EmptyInput)));
        assert!(matches!(parse("0 1\n0 1", true), Err(Error::DuplicateArc { line: 2, .. })));
        assert!(matches!(parse("0 1\n1 0", false), Err(Error::DuplicateArc { line: 2, .. })));
        assert!(matches!(parse("3 3", true), Err(Error::SelfLoop { line: 1, .. })));
        assert!(matches!(parse("0 1 0.5\n1 2", true), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn undirected_gives_both_arcs() {
        let g = parse("x y 0.3", false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.out_edges(1).collect::<Vec<_>>(), vec![(0, 0.3)]);
        assert!(!g.is_directed());
    }

    #[test]
    fn comments_and_unweighted() {
        let g = parse("# header\n0 1\n\n1 2\n", true).unwrap();
        assert!(!g.is_weighted());
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn weighted_cascade_defaults_to_in_degree() {
        let g = parse("a v\nb v", true).unwrap();
        let g = assign_probabilities(&g, &ProbModel::WeightedCascade(None), 0).unwrap();
        assert!(g.arcs().all(|(_, _, p)| p == 0.5));
    }

    #[test]
    fn weighted_cascade_with_counts() {
        let g = parse("a v\nb v", true).unwrap();
        let v = g.node("v").unwrap();
        let mut per_node = vec![1.0; 3];
        per_node[v as usize] = 4.0;
        let mut per_arc = HashMap::new();
        per_arc.insert((g.node("a").unwrap(), v), 3.0);
        let g = assign_probabilities(&g, &ProbModel::WeightedCascade(Some(CascadeCounts { per_node, per_arc })), 0)
            .unwrap();
        let probs: Vec<f64> = g.arcs().map(|a| a.2).collect();
        assert_eq!(probs, vec![0.75, 0.25]);
    }

    #[test]
    fn weighted_cascade_rejects_zero_count() {
        let g = parse("a v", true).unwrap();
        let counts = CascadeCounts { per_node: vec![1.0, 0.0], per_arc: HashMap::new() };
        assert!(assign_probabilities(&g, &ProbModel::WeightedCascade(Some(counts)), 0).is_err());
    }

    #[test]
    fn constant_and_trivalency() {
        let g = parse("0 1\n1 2\n2 0", true).unwrap();
        let c = assign_probabilities(&g, &ProbModel::Constant(1.0), 0).unwrap();
        assert!(c.arcs().all(|(_, _, p)| p == 1.0));
        let t1 = assign_probabilities(&g, &ProbModel::Trivalency, 9).unwrap();
        let t2 = assign_probabilities(&g, &ProbModel::Trivalency, 9).unwrap();
        assert_eq!(t1, t2);
        assert!(t1.arcs().all(|(_, _, p)| TRIVALENCY_LEVELS.contains(&p)));
    }

    #[test]
    fn trivalency_depends_on_seed() {
        let arcs: Vec<_> = (0..150u32).map(|i| (i, i + 1, 1.0)).collect();
        let g = Graph::from_edges(151, &arcs).unwrap();
        let draws: Vec<Vec<f64>> = (0..5)
            .map(|s| assign_probabilities(&g, &ProbModel::Trivalency, s).unwrap().arcs().map(|a| a.2).collect())
            .collect();
        assert!(draws.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn validation_findings() {
        let g = parse("a u 0.5\nb u 0.5\nc u 0.5", true).unwrap();
        let mut tau = vec![1.0; 4];
        tau[g.node("u").unwrap() as usize] = 7.0 / 8.0;
        let target = TargetSet::all(4);
        assert!(validate(&g, &Thresholds::from_values(tau.clone()), &target).is_valid());

        tau[0] = 0.0;
        let report = validate(&g, &Thresholds::from_values(tau), &target);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].contains("threshold must be in (0,1]"));

        let mut broken = g.clone();
        broken.in_probs[0] = 0.25;
        let report = validate(&broken, &Thresholds::uniform(4, 1.0).unwrap(), &target);
        assert!(report.violations.iter().any(|v| v.contains("transpose")));
    }

    #[test]
    fn thresholds_file() {
        let g = parse("a b\nb c", true).unwrap();
        let t = Thresholds::load("a 0.5\n# c stays default\nb 0.25".as_bytes(), &g, Some(0.9)).unwrap();
        assert_eq!(t.as_slice(), &[0.5, 0.25, 0.9]);
        assert!(Thresholds::load("a 0.5".as_bytes(), &g, None).is_err());
        assert!(Thresholds::load("a 1.5".as_bytes(), &g, Some(1.0)).is_err());
        assert!(Thresholds::load("zz 0.5".as_bytes(), &g, Some(1.0)).is_err());
    }

    #[test]
    fn target_sets() {
        assert!(TargetSet::from_nodes(3, []).is_err());
        assert!(TargetSet::from_nodes(3, [5]).is_err());
        let t = TargetSet::from_nodes(4, [2, 0, 2]).unwrap();
        assert_eq!(t.members(), &[0, 2]);
        assert!(t.contains(2) && !t.contains(1));
    }

    #[test]
    fn write_then_reload_is_identical() {
        let g = parse("p q 0.25\nq r 0.5\nr p 0.125", true).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(load_edge_list(buf.as_slice(), true).unwrap(), g);
    }
}
