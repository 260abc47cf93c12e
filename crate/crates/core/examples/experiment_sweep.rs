// A parameter sweep from a `key = value` config: every algorithm at every
// threshold and budget, written as one CSV table.

use cumact::experiment::{run_experiment, ExperimentConfig};
use cumact::{fixtures, synthetic};

pub fn run_example() -> cumact::Result<()> {
    let dir = tempfile::tempdir()?;
    let graph = synthetic::random_small(40, 120, 0.05, 0.4, 6)?;
    graph.write_edge_list(std::fs::File::create(dir.path().join("graph.txt"))?)?;
    std::fs::write(dir.path().join("star.txt"), fixtures::STAR)?;

    let text = "\
graph = graph.txt
tau = 0.3, 0.6
budgets = 1, 3, 5
c = 1.0, 1.7
theta = 300
eval_runs = 2000
seed = 12
algorithms = btg, adg, coverage, degree, pagerank, random
";
    let config = ExperimentConfig::parse(text, dir.path())?;
    print!("{config}");
    let table = run_experiment(&config)?;
    table.write_csv(std::io::stdout().lock())?;
    // two taus x (2 btg + 5 others) x three budgets
    assert_eq!(table.rows.len(), 2 * 7 * 3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> cumact::Result<()> {
    run_example()
}
