//! Reducing a long list of weighted entries to a short one whose weighted
//! sum matches in expectation.

use hyperest::importance::SamplingParams;
use hyperest::rng::stream;
use hyperest::{importance_sample, Result, WeightedEstimate};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub fn run_example() -> Result<()> {
    // Entry i carries m_o = 1 + i % 37 and an estimate within a factor 2.
    let counts: Vec<u64> = (0..2000).map(|i| 1 + i % 37).collect();
    let entries: Vec<WeightedEstimate<u64>> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| WeightedEstimate {
            item: c,
            weight: BigRational::from_integer(BigInt::from(1 + i % 3)),
            estimate: if i % 2 == 0 { c as f64 } else { (2 * c) as f64 },
        })
        .collect();
    let sum = |list: &[WeightedEstimate<u64>]| {
        list.iter()
            .fold(BigRational::zero(), |acc, e| acc + &e.weight * BigRational::from_integer(e.item.into()))
    };
    let before = sum(&entries);
    let params = SamplingParams { lambda: 0.1, delta: 0.05, alpha: 2.0, m_bound: 1e6 };
    println!("sufficient size {:.0}", params.sufficient_size());

    for seed in 0..3 {
        let kept = importance_sample(entries.clone(), &params, 400, &mut stream(seed, &[]))?;
        let after = sum(&kept);
        let dev = ((&after - &before) / &before).to_f64().unwrap_or(f64::NAN);
        println!("seed {seed}: {} -> {} entries, relative change {dev:+.4}", entries.len(), kept.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
