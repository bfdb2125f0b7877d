//! One sparsification step: colour classes, the hash, and the surviving
//! weighted ordered count compared with the original.

use hyperest::engine::weighted_total;
use hyperest::{brute_ordered_count, generate, sparsify, CompactTuple, GeneratorSpec, PartiteTuple, Result};
use num_traits::ToPrimitive;

pub fn run_example() -> Result<()> {
    let h = generate(&GeneratorSpec::random(32, 2, 200, 3))?;
    let root = PartiteTuple::compact(CompactTuple::whole(h.n(), h.d()));
    let m_o = brute_ordered_count(&h, &root.form)?;

    let seeds = 200;
    let mut sum = 0.0;
    for s in 0..seeds {
        let children = sparsify(&root, 4, 2 * s, 2 * s + 1)?;
        let total = weighted_total(&children, &h)?;
        if s == 0 {
            println!("seed 0: {} children, weighted count {total}", children.len());
        }
        sum += total.to_f64().unwrap_or(f64::NAN);
    }
    println!("m_o = {m_o}, mean weighted count over {seeds} seeds = {:.1}", sum / seeds as f64);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
