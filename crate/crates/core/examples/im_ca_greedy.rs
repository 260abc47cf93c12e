// Influence maximization under cumulative activation: pick `k` seeds with
// the balanced-truncation and activation-dominance rules, then score both
// seed sets with an independent Monte-Carlo evaluation.

use cumact::experiment::evaluate_seeds;
use cumact::graph::{assign_probabilities, ProbModel, TargetSet, Thresholds};
use cumact::problem::{ProblemSpec, Strategy};
use cumact::{solvers, synthetic};

pub fn run_example() -> cumact::Result<()> {
    let g = synthetic::random_directed(2000, 5.0, 3)?;
    let g = assign_probabilities(&g, &ProbModel::WeightedCascade(None), 0)?;
    let n = g.node_count();
    let tau = Thresholds::uniform(n, 0.3)?;
    let target = TargetSet::all(n);

    for strategy in [Strategy::BalancedTruncation { c: 1.7 }, Strategy::ActivationDominance] {
        let spec = ProblemSpec::im_ca(20, target.clone(), tau.clone()).with_strategy(strategy).with_theta(200).with_seed(9);
        let mut report = solvers::solve_im_ca(&g, &spec)?;
        report.evaluation = Some(evaluate_seeds(&g, &tau, &target, &report.seeds, 5_000, 1)?);
        let eval = report.evaluation.as_ref().expect("just set");
        println!(
            "{}: estimated {} active, evaluated {} ({} near threshold)",
            report.algorithm,
            report.estimated_active(),
            eval.rho_hat,
            eval.near_threshold
        );
        // Seeds are active with probability 1.
        assert!(eval.rho_hat >= 20);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
