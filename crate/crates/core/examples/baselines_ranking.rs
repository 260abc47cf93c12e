// The comparison rankers (RR-set coverage greedy, out-degree, PageRank,
// random) on one graph, with evaluated performance of their top seeds.

use cumact::baselines::{coverage_greedy, pagerank, random_ranking, rank_by_degree, DEFAULT_RESTART, DEFAULT_TOLERANCE};
use cumact::experiment::evaluate_seeds;
use cumact::graph::{assign_probabilities, ProbModel, TargetSet, Thresholds};
use cumact::rrset::build_index;
use cumact::synthetic;

pub fn run_example() -> cumact::Result<()> {
    let g = synthetic::random_directed(1000, 6.0, 17)?;
    let g = assign_probabilities(&g, &ProbModel::Trivalency, 17)?;
    let n = g.node_count();
    let (target, tau) = (TargetSet::all(n), Thresholds::uniform(n, 0.05)?);
    let k = 25;

    let index = build_index(&g, &target, &tau, 200, 1)?;
    let rankings = [
        ("coverage", coverage_greedy(&index, k)?),
        ("degree", rank_by_degree(&g).order),
        ("pagerank", pagerank(&g, DEFAULT_RESTART, DEFAULT_TOLERANCE)?.order),
        ("random", random_ranking(&g, 1).order),
    ];
    for (name, order) in &rankings {
        let eval = evaluate_seeds(&g, &tau, &target, &order[..k], 2_000, 3)?;
        println!("{name:>8}: top {k} seeds leave {} nodes cumulatively active", eval.rho_hat);
    }

    let mut top = Vec::new();
    rank_by_degree(&g).write(&g, &mut top)?;
    print!("{}", String::from_utf8_lossy(&top).lines().take(3).map(|l| format!("{l}\n")).collect::<String>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
