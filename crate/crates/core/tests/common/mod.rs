#![allow(dead_code)]

use hyperest::{Hypergraph, Vertex};

/// Ordered count by trying every permutation of every hyperedge against the
/// positions. Written independently of the library's assignment DP.
pub fn ordered_by_permutations(h: &Hypergraph, sets: &[Vec<Vertex>]) -> u64 {
    let d = sets.len();
    let mut total = 0;
    for e in h.edges() {
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            if idx.iter().enumerate().all(|(p, &i)| sets[p].contains(&e[i])) {
                total += 1;
            }
            if !next_perm(&mut idx) {
                break;
            }
        }
    }
    total
}

/// Hyperedges with at least one placement, one vertex per set.
pub fn count_by_permutations(h: &Hypergraph, sets: &[Vec<Vertex>]) -> u64 {
    let d = sets.len();
    let mut total = 0;
    for e in h.edges() {
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            if idx.iter().enumerate().all(|(p, &i)| sets[p].contains(&e[i])) {
                total += 1;
                break;
            }
            if !next_perm(&mut idx) {
                break;
            }
        }
    }
    total
}

fn next_perm(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Random edge lists without the library generator.
pub fn random_hypergraph(n: usize, d: usize, m: usize, seed: u64) -> Hypergraph {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut verts: Vec<Vertex> = (0..n as Vertex).collect();
    let mut tries = 0;
    while edges.len() < m && tries < 50 * m + 50 {
        tries += 1;
        verts.shuffle(&mut rng);
        let mut e = verts[..d].to_vec();
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    Hypergraph::new(n, d, edges).expect("valid edges")
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
