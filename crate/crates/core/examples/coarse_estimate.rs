//! Coarse estimation of the ordered count of a whole vertex set, with the
//! window the estimate is guaranteed to land in.

use hyperest::coarse::bound_factors;
use hyperest::rng::stream;
use hyperest::{brute_ordered_count, coarse_estimate, generate, CompactTuple, GeneratorSpec, Oracle, Result, TupleForm};

pub fn run_example() -> Result<()> {
    let h = generate(&GeneratorSpec::random(64, 2, 150, 9))?;
    let whole = CompactTuple::whole(h.n(), h.d());
    let m_o = brute_ordered_count(&h, &TupleForm::Compact(whole.clone()))? as f64;
    let (below, above) = bound_factors(h.n(), h.d());
    println!("m_o = {m_o}, window [{:.3}, {:.0}]", m_o / below, m_o * above);

    let general = whole.to_general();
    for seed in 0..3 {
        let mut o = Oracle::direct(&h);
        let mut rng = stream(seed, &[]);
        let res = coarse_estimate(&mut o, &general, &mut rng, 200)?;
        println!(
            "seed {seed}: estimate {} (2^{:?} scaled), {} trials, {} gpis2",
            res.estimate,
            res.accepted_exponent,
            res.trials_used,
            o.counts().gpis2
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
