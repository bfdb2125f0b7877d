//! Exact ordered counting with a threshold, checked against brute force.

use hyperest::exact::exact_count_traced;
use hyperest::{brute_ordered_count, generate, CompactTuple, GeneratorSpec, Oracle, Result, TupleForm};

pub fn run_example() -> Result<()> {
    let h = generate(&GeneratorSpec::planted_clique(32, 3, 8, 2))?;
    let whole = CompactTuple::whole(h.n(), h.d());
    let truth = brute_ordered_count(&h, &TupleForm::Compact(whole.clone()))?;
    println!("m = {}, ordered count = {truth}", h.num_edges());

    for tau in [100, 400] {
        let mut o = Oracle::direct(&h);
        let trace = exact_count_traced(&mut o, &whole, tau)?;
        println!(
            "tau = {tau}: {:?} after {} nodes, {} gpis1 queries",
            trace.outcome, trace.nodes, o.counts().gpis1
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
