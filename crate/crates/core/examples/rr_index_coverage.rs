// Builds per-target RR-set collections, reads activation probabilities off
// them as coverage fractions, tracks requirement counters while seeds are
// added, and round-trips the index through a snapshot.

use cumact::graph::{TargetSet, Thresholds};
use cumact::rrset::{required_theta, RRIndex};
use cumact::{oracle, synthetic};

pub fn run_example() -> cumact::Result<()> {
    let g = synthetic::random_small(8, 12, 0.1, 0.9, 5)?;
    let n = g.node_count();
    let target = TargetSet::all(n);
    let tau = Thresholds::uniform(n, 0.3)?;
    let mut index = RRIndex::build(&g, &target, &tau, 20_000, 11, None)?;
    println!("{} sets, about {} KiB", index.total_sets(), index.memory_bytes() / 1024);

    let seeds = [1, 4];
    let exact = oracle::exact_activation_probs(&g, &seeds)?;
    for u in 0..n as u32 {
        let cov = index.coverage_fraction(u, &seeds)?;
        println!("node {u}: P_u = {:.4}, coverage = {cov:.4}, req = {}", exact.get(u), index.req(u)?);
        assert!((cov - exact.get(u)).abs() < 0.03);
    }

    for &s in &seeds {
        let removed = index.remove_hit_sets(s);
        println!("seed {s} removed {} sets; {} targets estimated active", removed.total(), index.estimated_active_count());
    }

    let mut bytes = Vec::new();
    index.write_snapshot(&mut bytes)?;
    assert_eq!(RRIndex::read_snapshot(bytes.as_slice())?, index);
    println!("snapshot of {} bytes restores the same index", bytes.len());

    println!("theta for n = 29357, eps = 0.1: {}", required_theta(29357, 0.1)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
