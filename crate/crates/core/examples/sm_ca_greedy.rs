// Seed minimization: the fewest seeds the RR-set greedy needs before
// `eta` targets are estimated active, and the infeasible outcome when the
// allowed seeds cannot reach the targets.

use cumact::graph::{assign_probabilities, ProbModel, TargetSet, Thresholds};
use cumact::problem::{ProblemSpec, Strategy};
use cumact::{fixtures, solvers, synthetic, Error};

pub fn run_example() -> cumact::Result<()> {
    let g = synthetic::random_directed(500, 4.0, 8)?;
    let g = assign_probabilities(&g, &ProbModel::Constant(0.15), 0)?;
    let n = g.node_count();
    let tau = Thresholds::uniform(n, 0.2)?;
    for eta in [20, 100, 250] {
        let spec = ProblemSpec::sm_ca(eta, TargetSet::all(n), tau.clone()).with_theta(300).with_seed(2);
        let report = solvers::solve_sm_ca(&g, &spec)?;
        println!("eta = {eta}: {} seeds, {} estimated active", report.seeds.len(), report.estimated_active());
        assert!(report.estimated_active() >= eta);
    }

    let fan = fixtures::fan_in3();
    let u = fan.node("u").expect("fixture has u");
    let spec = ProblemSpec::sm_ca(1, TargetSet::from_nodes(4, [u])?, Thresholds::uniform(4, 0.9)?)
        .with_strategy(Strategy::ActivationDominance)
        .with_theta(1000)
        .with_candidates(fan.nodes(["a", "b", "c"])?);
    match solvers::solve_sm_ca(&fan, &spec) {
        Err(Error::Infeasible { achieved, required }) => {
            println!("sources alone reach u with probability 7/8 < 0.9: {achieved} of {required} active")
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
