// Three sources feed one sink with probability 1/2 each and the sink needs
// activation probability 7/8. Neither one nor two sources get it there,
// all three do: adding `c` helps `{a, b}` but not `{a}`, so the count of
// cumulatively active nodes is not submodular. The truncated surrogate
// `f(S) = sum min(P_u(S), tau_u)` still is.

use cumact::graph::TargetSet;
use cumact::{fixtures, oracle};

pub fn run_example() -> cumact::Result<()> {
    let g = fixtures::fan_in3();
    let tau = fixtures::fan_in3_thresholds(&g);
    let u = g.node("u").expect("fixture has u");
    let sink = TargetSet::from_nodes(g.node_count(), [u])?;

    let sets = [vec!["a"], vec!["a", "c"], vec!["a", "b"], vec!["a", "b", "c"]];
    let mut rho = Vec::new();
    for labels in &sets {
        let seeds = g.nodes(labels.iter().copied())?;
        let probs = oracle::exact_activation_probs(&g, &seeds)?;
        let r = probs.rho(&tau, &sink);
        let f = probs.truncated_sum(&tau, 1.0, Some(&sink));
        println!("S = {{{}}}: P_u = {:.4}, rho = {r}, f = {f:.4}", labels.join(","), probs.get(u));
        rho.push(r);
    }
    // rho({a,c}) - rho({a}) = 0 < 1 = rho({a,b,c}) - rho({a,b}).
    assert_eq!(rho, vec![0, 0, 0, 1]);
    println!("marginal of c: {} on {{a}}, {} on {{a,b}}", rho[1] - rho[0], rho[3] - rho[2]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
