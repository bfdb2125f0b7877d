//! The three query kinds on a small random hypergraph, in direct and
//! simulated mode, with their query counters.

use hyperest::tuple::{Part, PartRef};
use hyperest::{generate, GeneratorSpec, Oracle, OracleConfig, Result, Vertex};

pub fn run_example() -> Result<()> {
    let h = generate(&GeneratorSpec::random(12, 3, 30, 5))?;
    let left: Vec<Vertex> = (0..4).collect();
    let middle: Vec<Vertex> = (4..8).collect();
    let right: Vec<Vertex> = (8..12).collect();

    let mut direct = Oracle::direct(&h);
    let yes = direct.gpis(&[&left, &middle, &right])?;
    println!("gpis(0..4, 4..8, 8..12) = {yes}");

    let all: Vec<Vertex> = (0..12).collect();
    let whole = [PartRef { set: &all, multiplicity: 3 }];
    println!("gpis1(U^[3]) = {}", direct.gpis1(&whole)?);

    let overlapping: Vec<Vertex> = (2..10).collect();
    println!("gpis2(0..8, 2..10, 4..12) = {}", direct.gpis2(&[&all[..8], &overlapping, &all[4..]])?);
    println!("direct counts: {:?}", direct.counts());

    let mut simulated = Oracle::new(&h, OracleConfig::simulated(h.n(), h.d()), 11);
    let pair = Part::new(left.clone(), 2);
    let single = Part::new(right.clone(), 1);
    let answer = simulated.gpis1(&[pair.as_ref(), single.as_ref()])?;
    println!("simulated gpis1(A^[2], C) = {answer}, counts {:?}", simulated.counts());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
