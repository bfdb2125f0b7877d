//! Deterministic test-corpus generators.

use std::collections::HashSet;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::count::binomial;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::{self, label};
use crate::Vertex;

/// Above this many candidate subsets we never enumerate them all.
const ENUMERATION_LIMIT: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GeneratorKind {
    /// `m` distinct d-subsets drawn uniformly.
    RandomUniform,
    /// `m` distinct hyperedges that all contain the same `core` vertices.
    Sunflower { core: usize },
    /// Every d-subset of a random `clique`-vertex subset; `m` is ignored.
    PlantedClique { clique: usize },
    /// No hyperedges; `m` is ignored.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn random(n: usize, d: usize, m: usize, seed: u64) -> Self {
        Self { kind: GeneratorKind::RandomUniform, n, d, m, seed }
    }

    pub fn sunflower(n: usize, d: usize, m: usize, core: usize, seed: u64) -> Self {
        Self { kind: GeneratorKind::Sunflower { core }, n, d, m, seed }
    }

    pub fn planted_clique(n: usize, d: usize, clique: usize, seed: u64) -> Self {
        Self { kind: GeneratorKind::PlantedClique { clique }, n, d, m: 0, seed }
    }

    pub fn empty(n: usize, d: usize) -> Self {
        Self { kind: GeneratorKind::Empty, n, d, m: 0, seed: 0 }
    }

    fn tag(&self) -> u64 {
        match self.kind {
            GeneratorKind::RandomUniform => 1,
            GeneratorKind::Sunflower { .. } => 2,
            GeneratorKind::PlantedClique { .. } => 3,
            GeneratorKind::Empty => 4,
        }
    }
}

/// Builds the hypergraph described by `spec`. Identical specs give identical
/// hypergraphs.
pub fn generate(spec: &GeneratorSpec) -> Result<Hypergraph> {
    let (n, d) = (spec.n, spec.d);
    if d == 0 {
        return Err(Error::InvalidParameter("uniformity d must be at least 1".into()));
    }
    if n > Vertex::MAX as usize {
        return Err(Error::InvalidParameter(format!("n = {n} does not fit a vertex id")));
    }
    let mut rng = rng::stream(spec.seed, &[label::GENERATOR, spec.tag()]);
    let edges = match spec.kind {
        GeneratorKind::Empty => Vec::new(),
        GeneratorKind::RandomUniform => {
            let all: Vec<Vertex> = (0..n as Vertex).collect();
            random_subsets(&all, d, spec.m, &mut rng)?
        }
        GeneratorKind::Sunflower { core } => {
            if core >= d || core > n {
                return Err(Error::InvalidParameter(format!(
                    "sunflower core {core} must be smaller than d = {d} and at most n = {n}"
                )));
            }
            let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
            perm.shuffle(&mut rng);
            let (center, rest) = perm.split_at(core);
            let mut rest = rest.to_vec();
            rest.sort_unstable();
            random_subsets(&rest, d - core, spec.m, &mut rng)?
                .into_iter()
                .map(|mut petal| {
                    petal.extend_from_slice(center);
                    petal
                })
                .collect()
        }
        GeneratorKind::PlantedClique { clique } => {
            if clique > n {
                return Err(Error::Infeasible { requested: clique as u128, available: n as u128 });
            }
            let mut members: Vec<Vertex> =
                index::sample(&mut rng, n, clique).into_iter().map(|v| v as Vertex).collect();
            members.sort_unstable();
            let mut edges = Vec::new();
            for_each_subset(clique, d, |idx| edges.push(idx.iter().map(|&i| members[i]).collect()));
            edges
        }
    };
    Hypergraph::new(n, d, edges)
}

/// `m` distinct `d`-subsets of `pool`, uniformly at random.
fn random_subsets(
    pool: &[Vertex],
    d: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<Vertex>>> {
    let available = binomial(pool.len() as u64, d as u64);
    if m as u128 > available {
        return Err(Error::Infeasible { requested: m as u128, available });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    if d == 0 {
        return Ok(vec![Vec::new()]);
    }
    // Dense requests: shuffle the full list instead of rejecting forever.
    if available <= ENUMERATION_LIMIT && (m as u128) * 2 > available {
        let mut all = Vec::with_capacity(available as usize);
        for_each_subset(pool.len(), d, |idx| all.push(idx.iter().map(|&i| pool[i]).collect()));
        let picked = index::sample(rng, all.len(), m);
        return Ok(picked.into_iter().map(|i| std::mem::take(&mut all[i])).collect());
    }
    let mut seen: HashSet<Vec<Vertex>> = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let mut e: Vec<Vertex> =
            index::sample(rng, pool.len(), d).into_iter().map(|i| pool[i]).collect();
        e.sort_unstable();
        if seen.insert(e.clone()) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Calls `f` on every strictly increasing `k`-subset of `0..n`, in
/// lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
