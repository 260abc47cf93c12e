// Monte-Carlo estimates of activation probabilities against exact
// enumeration, plus the run count needed for a target accuracy.

use cumact::cascade::{estimate, required_runs};
use cumact::graph::{TargetSet, Thresholds};
use cumact::{oracle, synthetic};

pub fn run_example() -> cumact::Result<()> {
    let g = synthetic::random_small(7, 11, 0.1, 0.9, 42)?;
    let n = g.node_count();
    let seeds: Vec<u32> = (0..n as u32).filter(|&v| g.out_degree(v) > 0).take(2).collect();
    let exact = oracle::exact_activation_probs(&g, &seeds)?;
    let tau = Thresholds::uniform(n, 0.4)?;
    let est = estimate(&g, &seeds, &tau, &TargetSet::all(n), 100_000, 1.0, 7)?;

    let mut worst: f64 = 0.0;
    for u in 0..n as u32 {
        let (p, q) = (exact.get(u), est.activation.probability(u));
        worst = worst.max((p - q).abs());
        println!("node {u}: exact {p:.4}  estimate {q:.4}");
    }
    println!("largest gap {worst:.4}; rho_hat = {}, f_hat = {:.3}", est.rho_hat, est.f_hat);
    assert!(worst < 0.02);

    for (gamma, delta) in [(1.0, 1.0), (0.5, 1.0), (0.1, 2.0)] {
        println!("runs for |f_hat - f| <= {gamma} w.p. 1 - n^-{delta}: {}", required_runs(n, gamma, delta)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
