//! Per-node reverse-reachable (RR) set collections with an inverted index
//! and the requirement counters driving the RR-set greedy.
//!
//! For a root `u`, an RR set is the set of nodes that reach `u` in a random
//! live-edge subgraph. `P_u(S)` equals the probability that `S` meets such a
//! set, so the fraction of `u`'s sets hit by `S` estimates `P_u(S)`.
//! `req(u)` starts at `ceil(tau_u * theta)` and drops by one for every set of
//! `u` removed because a chosen seed hit it; `u` counts as cumulatively
//! active once `req(u) <= 0`.

use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, TargetSet, Thresholds};
use crate::rng::{Domain, Substreams};

const NO_SLOT: u32 = u32::MAX;
const OWNER_BATCH: usize = 512;
const SNAPSHOT_MAGIC: &[u8; 4] = b"CARR";
const SNAPSHOT_VERSION: u32 = 1;

/// Reverse breadth-first sampler with reusable scratch.
pub struct RrSampler<'g> {
    graph: &'g Graph,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<NodeId>,
}

impl<'g> RrSampler<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        RrSampler { graph, stamp: vec![0; graph.node_count()], epoch: 0, queue: Vec::new() }
    }

    /// Samples one RR set for `root`, sorted by id. Each incoming arc of a
    /// reached node is flipped at most once, when its head is first expanded.
    pub fn sample<R: Rng + ?Sized>(&mut self, root: NodeId, rng: &mut R) -> Vec<NodeId> {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.queue.clear();
        self.queue.push(root);
        self.stamp[root as usize] = epoch;
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for (w, p) in self.graph.in_edges(x) {
                if self.stamp[w as usize] != epoch && rng.gen::<f64>() < p {
                    self.stamp[w as usize] = epoch;
                    self.queue.push(w);
                }
            }
        }
        let mut set = self.queue.clone();
        set.sort_unstable();
        set
    }
}

/// One RR set rooted at `root`.
pub fn generate_rr_set<R: Rng + ?Sized>(graph: &Graph, root: NodeId, rng: &mut R) -> Vec<NodeId> {
    RrSampler::new(graph).sample(root, rng)
}

/// `ceil(tau * theta)`, snapped so that products such as `0.7 * 100` that
/// land a hair above an integer do not round up.
pub fn initial_requirement(tau: f64, theta: u32) -> i64 {
    let raw = tau * theta as f64;
    ((raw - 1e-9).ceil() as i64).max(1)
}

/// Smallest `theta >= ln(2n) / (2 eps^2)`, which keeps each coverage
/// fraction within `eps` of `P_u(S)` with probability at least `1 - 1/n`.
pub fn required_theta(n: usize, eps: f64) -> Result<u64> {
    if n == 0 || !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("need n >= 1 and eps > 0 (got {n}, {eps})")));
    }
    let t = ((2.0 * n as f64).ln() / (2.0 * eps * eps)).ceil();
    if !t.is_finite() || t >= u64::MAX as f64 {
        return Err(Error::InvalidParameter(format!("theta overflows ({t})")));
    }
    Ok((t as u64).max(1))
}

/// Number of sets removed from each owner by one [`RRIndex::remove_hit_sets`] call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Removal {
    /// `(owner, rem(owner))` for owners that lost at least one set, by owner id.
    pub per_owner: Vec<(NodeId, u32)>,
}

impl Removal {
    pub fn count(&self, owner: NodeId) -> u32 {
        self.per_owner
            .binary_search_by_key(&owner, |e| e.0)
            .map(|i| self.per_owner[i].1)
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.per_owner.iter().map(|e| e.1 as u64).sum()
    }
}

/// RR-set collections for every target node.
#[derive(Debug, Clone, PartialEq)]
pub struct RRIndex {
    n: usize,
    theta: u32,
    seed: u64,
    owners: Vec<NodeId>,
    owner_slot: Vec<u32>,
    taus: Vec<f64>,
    set_offsets: Vec<usize>,
    set_nodes: Vec<NodeId>,
    removed: Vec<bool>,
    inv_offsets: Vec<usize>,
    inv_sets: Vec<u32>,
    req_init: Vec<i64>,
    req: Vec<i64>,
    live: Vec<u32>,
    active: usize,
}

/// Approximate heap footprint for the given shape.
fn footprint(n: usize, owners: usize, sets: usize, entries: usize) -> u64 {
    let per_set = 8 + 1;
    let per_entry = 4 + 4;
    let per_node = 4 + 8 + 8;
    let per_owner = 4 + 8 + 8 + 8 + 4;
    (sets * per_set + entries * per_entry + n * per_node + owners * per_owner) as u64
}

/// Builds an index with `theta` sets per target node and no memory budget.
pub fn build_index(graph: &Graph, target: &TargetSet, thresholds: &Thresholds, theta: u32, seed: u64) -> Result<RRIndex> {
    RRIndex::build(graph, target, thresholds, theta, seed, None)
}

impl RRIndex {
    /// Generates `theta` RR sets for every target node. Set `j` of root `u`
    /// draws from substream `(u << 32) | j`, so the result does not depend
    /// on thread scheduling. Fails early once the projected size exceeds
    /// `memory_cap` bytes.
    pub fn build(
        graph: &Graph,
        target: &TargetSet,
        thresholds: &Thresholds,
        theta: u32,
        seed: u64,
        memory_cap: Option<u64>,
    ) -> Result<Self> {
        let n = graph.node_count();
        if theta == 0 {
            return Err(Error::InvalidParameter("theta must be at least 1".to_string()));
        }
        if target.universe() != n || thresholds.len() != n {
            return Err(Error::InvalidParameter("target and thresholds must cover every node".to_string()));
        }
        let owners = target.members().to_vec();
        let total_sets = owners.len() as u64 * theta as u64;
        if total_sets > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!("{total_sets} RR sets exceed the id space")));
        }
        let total_sets = total_sets as usize;
        if let Some(cap) = memory_cap {
            let floor = footprint(n, owners.len(), total_sets, total_sets);
            if floor > cap {
                return Err(Error::MemoryBudgetExceeded { estimated: floor, cap });
            }
        }

        let streams = Substreams::new(seed, Domain::RrSets);
        let mut set_offsets = Vec::with_capacity(total_sets + 1);
        set_offsets.push(0usize);
        let mut set_nodes: Vec<NodeId> = Vec::with_capacity(total_sets);
        for (b, batch) in owners.chunks(OWNER_BATCH).enumerate() {
            let generated: Vec<Vec<Vec<NodeId>>> = batch
                .par_iter()
                .map_init(
                    || RrSampler::new(graph),
                    |sampler, &u| {
                        (0..theta)
                            .map(|j| {
                                let mut rng = streams.stream((u as u64) << 32 | j as u64);
                                sampler.sample(u, &mut rng)
                            })
                            .collect()
                    },
                )
                .collect();
            for sets in generated {
                for set in sets {
                    set_nodes.extend_from_slice(&set);
                    set_offsets.push(set_nodes.len());
                }
            }
            if let Some(cap) = memory_cap {
                let done = ((b + 1) * OWNER_BATCH).min(owners.len());
                let projected_entries = set_nodes.len() as f64 * owners.len() as f64 / done as f64;
                let projected = footprint(n, owners.len(), total_sets, projected_entries.ceil() as usize);
                if projected > cap {
                    return Err(Error::MemoryBudgetExceeded { estimated: projected, cap });
                }
            }
        }

        let taus = owners.iter().map(|&u| thresholds.get(u)).collect();
        Ok(Self::assemble(n, theta, seed, owners, taus, set_offsets, set_nodes, vec![false; total_sets]))
    }

    /// Index over explicit sets: `sets[i]` holds the `theta` sets of the
    /// i-th target member. Every set must contain its owner.
    pub fn from_sets(
        n: usize,
        target: &TargetSet,
        thresholds: &Thresholds,
        sets: Vec<Vec<Vec<NodeId>>>,
    ) -> Result<Self> {
        let owners = target.members().to_vec();
        if sets.len() != owners.len() {
            return Err(Error::InvalidParameter(format!("{} collections for {} owners", sets.len(), owners.len())));
        }
        let theta = sets.first().map(|s| s.len()).unwrap_or(0);
        if theta == 0 || theta > u32::MAX as usize {
            return Err(Error::InvalidParameter("theta must be at least 1".to_string()));
        }
        let mut set_offsets = vec![0usize];
        let mut set_nodes = Vec::new();
        for (&u, collection) in owners.iter().zip(sets) {
            if collection.len() != theta {
                return Err(Error::InvalidParameter(format!("owner {u} has {} sets, expected {theta}", collection.len())));
            }
            for mut set in collection {
                set.sort_unstable();
                set.dedup();
                if set.binary_search(&u).is_err() {
                    return Err(Error::InvalidParameter(format!("an RR set of {u} does not contain it")));
                }
                if set.last().is_some_and(|&v| v as usize >= n) {
                    return Err(Error::InvalidParameter("RR set node out of range".to_string()));
                }
                set_nodes.extend_from_slice(&set);
                set_offsets.push(set_nodes.len());
            }
        }
        let total = set_offsets.len() - 1;
        let taus = owners.iter().map(|&u| thresholds.get(u)).collect();
        Ok(Self::assemble(n, theta as u32, 0, owners, taus, set_offsets, set_nodes, vec![false; total]))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        n: usize,
        theta: u32,
        seed: u64,
        owners: Vec<NodeId>,
        taus: Vec<f64>,
        set_offsets: Vec<usize>,
        set_nodes: Vec<NodeId>,
        removed: Vec<bool>,
    ) -> Self {
        let mut owner_slot = vec![NO_SLOT; n];
        for (i, &u) in owners.iter().enumerate() {
            owner_slot[u as usize] = i as u32;
        }
        let (inv_offsets, inv_sets) = invert(n, &set_offsets, &set_nodes, |_| true);
        let req_init: Vec<i64> = taus.iter().map(|&t| initial_requirement(t, theta)).collect();
        let mut live = vec![theta; owners.len()];
        let mut req = req_init.clone();
        for (sid, _) in removed.iter().enumerate().filter(|e| *e.1) {
            let slot = sid / theta as usize;
            live[slot] -= 1;
            req[slot] -= 1;
        }
        let active = req.iter().filter(|&&r| r <= 0).count();
        RRIndex {
            n,
            theta,
            seed,
            owners,
            owner_slot,
            taus,
            set_offsets,
            set_nodes,
            removed,
            inv_offsets,
            inv_sets,
            req_init,
            req,
            live,
            active,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> u32 {
        self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Target nodes, increasing.
    pub fn owners(&self) -> &[NodeId] {
        &self.owners
    }

    pub fn is_owner(&self, u: NodeId) -> bool {
        self.slot(u).is_some()
    }

    pub(crate) fn slot(&self, u: NodeId) -> Option<usize> {
        match self.owner_slot.get(u as usize) {
            Some(&s) if s != NO_SLOT => Some(s as usize),
            _ => None,
        }
    }

    fn slot_or_err(&self, u: NodeId) -> Result<usize> {
        self.slot(u).ok_or_else(|| Error::InvalidParameter(format!("node {u} is not in the target set")))
    }

    pub fn total_sets(&self) -> usize {
        self.removed.len()
    }

    /// Nodes of set `sid`, sorted.
    pub fn set(&self, sid: usize) -> &[NodeId] {
        &self.set_nodes[self.set_offsets[sid]..self.set_offsets[sid + 1]]
    }

    pub fn is_removed(&self, sid: usize) -> bool {
        self.removed[sid]
    }

    pub fn owner_of_set(&self, sid: usize) -> NodeId {
        self.owners[sid / self.theta as usize]
    }

    /// Set ids of `u`'s collection.
    pub fn sets_of(&self, u: NodeId) -> Result<std::ops::Range<usize>> {
        let slot = self.slot_or_err(u)?;
        Ok(self.slot_sets(slot))
    }

    pub(crate) fn slot_sets(&self, slot: usize) -> std::ops::Range<usize> {
        let t = self.theta as usize;
        slot * t..(slot + 1) * t
    }

    pub(crate) fn slot_req(&self, slot: usize) -> i64 {
        self.req[slot]
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.owners.len()
    }

    pub fn req(&self, u: NodeId) -> Result<i64> {
        Ok(self.req[self.slot_or_err(u)?])
    }

    pub fn initial_req(&self, u: NodeId) -> Result<i64> {
        Ok(self.req_init[self.slot_or_err(u)?])
    }

    pub fn live_count(&self, u: NodeId) -> Result<u32> {
        Ok(self.live[self.slot_or_err(u)?])
    }

    pub fn removed_count(&self, u: NodeId) -> Result<u32> {
        let slot = self.slot_or_err(u)?;
        Ok(self.theta - self.live[slot])
    }

    /// Whether the hit sets already meet `u`'s requirement.
    pub fn is_estimated_active(&self, u: NodeId) -> bool {
        self.slot(u).is_some_and(|s| self.req[s] <= 0)
    }

    /// `|{u in U : req(u) <= 0}|`.
    pub fn estimated_active_count(&self) -> usize {
        self.active
    }

    /// Live sets containing `v`, in increasing id order.
    pub fn live_memberships(&self, v: NodeId) -> impl Iterator<Item = usize> + '_ {
        let r = self.inv_offsets[v as usize]..self.inv_offsets[v as usize + 1];
        self.inv_sets[r].iter().map(|&s| s as usize).filter(move |&s| !self.removed[s])
    }

    /// Number of live sets, over all owners, containing `v`.
    pub fn pooled_count(&self, v: NodeId) -> usize {
        self.live_memberships(v).count()
    }

    /// Fraction of `u`'s original sets that meet `seeds`. Removed sets keep
    /// their contents, so this is the plain overlap fraction over all theta
    /// sets.
    pub fn coverage_fraction(&self, u: NodeId, seeds: &[NodeId]) -> Result<f64> {
        let slot = self.slot_or_err(u)?;
        let mut mask = vec![false; self.n];
        for &s in seeds {
            if let Some(m) = mask.get_mut(s as usize) {
                *m = true;
            }
        }
        let hit = self.slot_sets(slot).filter(|&sid| self.set(sid).iter().any(|&v| mask[v as usize])).count();
        Ok(hit as f64 / self.theta as f64)
    }

    /// Number of live sets of `u` containing `v`; zero when `u` is not a target.
    pub fn overlap(&self, v: NodeId, u: NodeId) -> usize {
        let Some(slot) = self.slot(u) else { return 0 };
        let sets = self.slot_sets(slot);
        self.live_memberships(v).filter(|s| sets.contains(s)).count()
    }

    /// Removes every live set containing `x` and lowers each owner's
    /// requirement by the number of its sets removed. A second call with
    /// the same node removes nothing.
    pub fn remove_hit_sets(&mut self, x: NodeId) -> Removal {
        let r = self.inv_offsets[x as usize]..self.inv_offsets[x as usize + 1];
        let mut per_owner: Vec<(NodeId, u32)> = Vec::new();
        for i in r {
            let sid = self.inv_sets[i] as usize;
            if self.removed[sid] {
                continue;
            }
            self.removed[sid] = true;
            let slot = sid / self.theta as usize;
            self.live[slot] -= 1;
            self.req[slot] -= 1;
            if self.req[slot] == 0 {
                self.active += 1;
            }
            let owner = self.owners[slot];
            match per_owner.last_mut() {
                Some(last) if last.0 == owner => last.1 += 1,
                _ => per_owner.push((owner, 1)),
            }
        }
        Removal { per_owner }
    }

    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> u64 {
        footprint(self.n, self.owners.len(), self.total_sets(), self.set_nodes.len())
    }

    /// Verifies the bookkeeping against a from-scratch rebuild of the live
    /// inverted index, requirements and live counts.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let (offsets, sets) = invert(self.n, &self.set_offsets, &self.set_nodes, |s| !self.removed[s]);
        for v in 0..self.n as NodeId {
            let rebuilt: Vec<usize> =
                sets[offsets[v as usize]..offsets[v as usize + 1]].iter().map(|&s| s as usize).collect();
            let incremental: Vec<usize> = self.live_memberships(v).collect();
            if rebuilt != incremental {
                return Err(format!("inverted index of node {v} differs from rebuild"));
            }
        }
        let mut active = 0;
        for (slot, &u) in self.owners.iter().enumerate() {
            let removed = self.slot_sets(slot).filter(|&s| self.removed[s]).count() as i64;
            if self.req[slot] + removed != self.req_init[slot] {
                return Err(format!("req accounting broken for owner {u}"));
            }
            if self.live[slot] as i64 != self.theta as i64 - removed {
                return Err(format!("live count broken for owner {u}"));
            }
            if self.slot_sets(slot).any(|s| self.set(s).binary_search(&u).is_err()) {
                return Err(format!("an RR set of {u} misses its root"));
            }
            if self.req[slot] <= 0 {
                active += 1;
            }
        }
        if active != self.active {
            return Err("active counter out of sync".to_string());
        }
        Ok(())
    }

    /// Writes a versioned binary snapshot (little endian): header with
    /// `n`, `theta`, seed and owner count; per owner its id and threshold;
    /// every set as a length-prefixed id list; one removal flag byte per set.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(SNAPSHOT_MAGIC)?;
        out.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
        out.write_all(&(self.n as u64).to_le_bytes())?;
        out.write_all(&self.theta.to_le_bytes())?;
        out.write_all(&self.seed.to_le_bytes())?;
        out.write_all(&(self.owners.len() as u64).to_le_bytes())?;
        for (&u, &tau) in self.owners.iter().zip(&self.taus) {
            out.write_all(&u.to_le_bytes())?;
            out.write_all(&tau.to_le_bytes())?;
        }
        for sid in 0..self.total_sets() {
            let set = self.set(sid);
            out.write_all(&(set.len() as u32).to_le_bytes())?;
            for &v in set {
                out.write_all(&v.to_le_bytes())?;
            }
        }
        let flags: Vec<u8> = self.removed.iter().map(|&r| r as u8).collect();
        out.write_all(&flags)?;
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::Snapshot("bad magic".to_string()));
        }
        let version = read_u32(&mut input)?;
        if version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let n = read_u64(&mut input)? as usize;
        let theta = read_u32(&mut input)?;
        let seed = read_u64(&mut input)?;
        let owner_count = read_u64(&mut input)? as usize;
        if theta == 0 || owner_count > n {
            return Err(Error::Snapshot("inconsistent header".to_string()));
        }
        let mut owners = Vec::with_capacity(owner_count);
        let mut taus = Vec::with_capacity(owner_count);
        for _ in 0..owner_count {
            let u = read_u32(&mut input)?;
            if u as usize >= n || owners.last().is_some_and(|&p| p >= u) {
                return Err(Error::Snapshot("owners must be increasing ids below n".to_string()));
            }
            owners.push(u);
            taus.push(f64::from_le_bytes(read_array(&mut input)?));
        }
        let total = owner_count * theta as usize;
        let mut set_offsets = Vec::with_capacity(total + 1);
        set_offsets.push(0);
        let mut set_nodes = Vec::new();
        for sid in 0..total {
            let len = read_u32(&mut input)? as usize;
            let start = set_nodes.len();
            for _ in 0..len {
                let v = read_u32(&mut input)?;
                if v as usize >= n {
                    return Err(Error::Snapshot(format!("node {v} out of range")));
                }
                set_nodes.push(v);
            }
            let set = &set_nodes[start..];
            let owner = owners[sid / theta as usize];
            if !set.windows(2).all(|w| w[0] < w[1]) || set.binary_search(&owner).is_err() {
                return Err(Error::Snapshot(format!("set {sid} is unsorted or misses its root")));
            }
            set_offsets.push(set_nodes.len());
        }
        let mut flags = vec![0u8; total];
        input.read_exact(&mut flags)?;
        let removed = flags.into_iter().map(|f| f != 0).collect();
        Ok(Self::assemble(n, theta, seed, owners, taus, set_offsets, set_nodes, removed))
    }
}

fn invert(n: usize, set_offsets: &[usize], set_nodes: &[NodeId], keep: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<u32>) {
    let total = set_offsets.len() - 1;
    let mut offsets = vec![0usize; n + 1];
    for sid in (0..total).filter(|&s| keep(s)) {
        for &v in &set_nodes[set_offsets[sid]..set_offsets[sid + 1]] {
            offsets[v as usize + 1] += 1;
        }
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut sets = vec![0u32; offsets[n]];
    for sid in (0..total).filter(|&s| keep(s)) {
        for &v in &set_nodes[set_offsets[sid]..set_offsets[sid + 1]] {
            sets[cursor[v as usize]] = sid as u32;
            cursor[v as usize] += 1;
        }
    }
    (offsets, sets)
}

fn read_array<R: Read, const N: usize>(input: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf).map_err(|e| Error::Snapshot(format!("truncated: {e}")))?;
    Ok(buf)
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    Ok(u32::from_le_bytes(read_array(input)?))
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array(input)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn star_index(theta: u32) -> (Graph, RRIndex) {
        let g = fixtures::star();
        let t = Thresholds::uniform(4, 1.0).unwrap();
        let idx = build_index(&g, &TargetSet::all(4), &t, theta, 1).unwrap();
        (g, idx)
    }

    #[test]
    fn chain_and_isolated_sets() {
        let g = fixtures::chain2();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(generate_rr_set(&g, g.node("u").unwrap(), &mut rng), vec![0, 1]);
        let lonely = Graph::from_edges(3, &[(0, 1, 0.5)]).unwrap();
        assert_eq!(generate_rr_set(&lonely, 2, &mut rng), vec![2]);
    }

    #[test]
    fn fan_in_membership_frequency() {
        let g = fixtures::fan_in3();
        let (a, u) = (g.node("a").unwrap(), g.node("u").unwrap());
        let mut sampler = RrSampler::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let hits = (0..100_000).filter(|_| sampler.sample(u, &mut rng).contains(&a)).count();
        assert!((hits as f64 / 1e5 - 0.5).abs() <= 0.01);
    }

    #[test]
    fn star_sets_are_deterministic() {
        let (g, idx) = star_index(4);
        let expect = |owner: &str, labels: &[&str]| {
            let mut want = g.nodes(labels.iter().copied()).unwrap();
            want.sort_unstable();
            for sid in idx.sets_of(g.node(owner).unwrap()).unwrap() {
                assert_eq!(idx.set(sid), want.as_slice());
            }
        };
        expect("x", &["x", "a"]);
        expect("y", &["y", "a", "b"]);
        expect("a", &["a"]);
        expect("b", &["b"]);
        assert_eq!(idx.req(g.node("y").unwrap()).unwrap(), 4);
        idx.check_consistency().unwrap();
    }

    #[test]
    fn requirement_rounds_up() {
        assert_eq!(initial_requirement(0.5, 5), 3);
        assert_eq!(initial_requirement(1.0, 7), 7);
        assert_eq!(initial_requirement(0.7, 100), 70);
        assert_eq!(initial_requirement(7.0 / 8.0, 10_000), 8750);
        let g = fixtures::star();
        let idx = build_index(&g, &TargetSet::all(4), &Thresholds::uniform(4, 0.5).unwrap(), 5, 0).unwrap();
        assert!(idx.owners().iter().all(|&u| idx.req(u).unwrap() == 3));
    }

    #[test]
    fn coverage_fractions() {
        let (g, idx) = star_index(4);
        let (a, y) = (g.node("a").unwrap(), g.node("y").unwrap());
        assert_eq!(idx.coverage_fraction(y, &[a]).unwrap(), 1.0);
        assert_eq!(idx.coverage_fraction(y, &[]).unwrap(), 0.0);

        let fan = fixtures::fan_in3();
        let u = fan.node("u").unwrap();
        let target = TargetSet::from_nodes(4, [u]).unwrap();
        let idx = build_index(&fan, &target, &Thresholds::uniform(4, 1.0).unwrap(), 10_000, 4).unwrap();
        let frac = idx.coverage_fraction(u, &fan.nodes(["a", "b"]).unwrap()).unwrap();
        assert!((frac - 0.75).abs() <= 0.02, "{frac}");
        assert!(idx.coverage_fraction(fan.node("a").unwrap(), &[]).is_err());
    }

    #[test]
    fn overlap_and_removal() {
        let (g, mut idx) = star_index(4);
        let id = |l| g.node(l).unwrap();
        assert_eq!(idx.overlap(id("a"), id("y")), 4);
        assert_eq!(idx.overlap(id("b"), id("x")), 0);

        let rem = idx.remove_hit_sets(id("a"));
        assert_eq!(rem.count(id("x")), 4);
        assert_eq!(rem.count(id("y")), 4);
        assert_eq!(rem.count(id("a")), 4);
        assert_eq!(rem.count(id("b")), 0);
        assert_eq!(idx.req(id("y")).unwrap(), 0);
        assert_eq!(idx.req(id("b")).unwrap(), 4);
        assert_eq!(idx.overlap(id("b"), id("y")), 0);
        assert_eq!(idx.estimated_active_count(), 3);
        idx.check_consistency().unwrap();

        let again = idx.remove_hit_sets(id("a"));
        assert_eq!(again.total(), 0);
    }

    #[test]
    fn isolated_owner_removal() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let mut idx = build_index(&g, &TargetSet::all(3), &Thresholds::uniform(3, 1.0).unwrap(), 6, 0).unwrap();
        let rem = idx.remove_hit_sets(2);
        assert_eq!(rem.per_owner, vec![(2, 6)]);
    }

    #[test]
    fn theta_rule() {
        assert_eq!(required_theta(29357, 0.1).unwrap(), 550);
        assert_eq!(required_theta(1, 1.0).unwrap(), 1);
        let raw = |eps: f64| (2.0f64 * 500.0).ln() / (2.0 * eps * eps);
        assert!((raw(0.05) / raw(0.1) - 4.0).abs() < 1e-12);
        assert!(required_theta(10, 0.0).is_err());
    }

    #[test]
    fn memory_budget() {
        let g = fixtures::star();
        let t = Thresholds::uniform(4, 1.0).unwrap();
        let err = RRIndex::build(&g, &TargetSet::all(4), &t, 1000, 0, Some(1000)).unwrap_err();
        assert!(matches!(err, Error::MemoryBudgetExceeded { cap: 1000, .. }));
        assert!(RRIndex::build(&g, &TargetSet::all(4), &t, 10, 0, Some(1 << 20)).is_ok());
    }

    #[test]
    fn snapshot_round_trip() {
        let g = fixtures::fan_in3();
        let mut idx = build_index(&g, &TargetSet::all(4), &fixtures::fan_in3_thresholds(&g), 50, 8).unwrap();
        idx.remove_hit_sets(g.node("b").unwrap());
        let mut buf = Vec::new();
        idx.write_snapshot(&mut buf).unwrap();
        assert_eq!(RRIndex::read_snapshot(buf.as_slice()).unwrap(), idx);
        buf[0] = b'X';
        assert!(RRIndex::read_snapshot(buf.as_slice()).is_err());
    }

    #[test]
    fn build_is_reproducible() {
        let g = fixtures::fan_in3();
        let t = Thresholds::uniform(4, 0.5).unwrap();
        let a = build_index(&g, &TargetSet::all(4), &t, 200, 3).unwrap();
        let b = build_index(&g, &TargetSet::all(4), &t, 200, 3).unwrap();
        let c = build_index(&g, &TargetSet::all(4), &t, 200, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
