//! End-to-end estimation with the practical constants, and the phase trace.

use hyperest::experiment::{run_estimate, EstimateOptions};
use hyperest::{generate, GeneratorSpec, Result};

pub fn run_example() -> Result<()> {
    // A loose eps keeps tau small, so the larger instances go through the
    // sparsify and coarse phases instead of being counted at the root.
    for (spec, eps) in [
        (GeneratorSpec::random(512, 2, 6000, 1), 0.2),
        (GeneratorSpec::random(512, 2, 6000, 1), 0.9),
        (GeneratorSpec::sunflower(128, 3, 1500, 1, 2), 0.9),
        (GeneratorSpec::planted_clique(128, 3, 20, 3), 0.9),
    ] {
        let h = generate(&spec)?;
        let report = run_estimate(&h, &EstimateOptions::new(eps, 7))?;
        println!(
            "{:?} n = {} d = {} eps = {eps}: estimate {:.1}, m = {:?}, {} queries, {} iterations",
            spec.kind,
            h.n(),
            h.d(),
            report.estimate,
            report.true_m,
            report.queries.counts().total(),
            report.iterations
        );
        for phase in &report.trace {
            println!(
                "  iteration {} {:?}: {} -> {} tuples, {} queries",
                phase.iteration,
                phase.phase,
                phase.tuples_before,
                phase.tuples_after,
                phase.queries.total()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
