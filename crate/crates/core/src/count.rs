//! Exact hyperedge counting by enumeration.
//!
//! `brute_count` and `brute_ordered_count` scan every hyperedge and are the
//! ground truth the rest of the crate is tested against. The `exists_*`
//! helpers answer the same questions through the incidence index with early
//! exit; the direct oracle uses them.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::tuple::{validate_parts, PartRef, TupleForm};
use crate::Vertex;

#[inline]
fn member(set: &[Vertex], v: Vertex) -> bool {
    set.binary_search(&v).is_ok()
}

/// Whether `edge` has exactly `a_i` vertices in each `A_i`.
pub fn edge_matches_compact(edge: &[Vertex], parts: &[PartRef<'_>]) -> bool {
    parts
        .iter()
        .all(|p| edge.iter().filter(|&&v| member(p.set, v)).count() == p.multiplicity)
}

/// Number of bijections from positions to the vertices of `edge` that put
/// the vertex of position `i` inside `sets[i]`.
///
/// This is the number of ordered hyperedges `edge` contributes to
/// `m_o(A_1, ..., A_d)`.
pub fn assignment_count(edge: &[Vertex], sets: &[&[Vertex]]) -> u64 {
    let d = edge.len();
    if sets.len() != d {
        return 0;
    }
    let allowed: Vec<u32> = sets
        .iter()
        .map(|s| {
            edge.iter()
                .enumerate()
                .filter(|(_, &v)| member(s, v))
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    if allowed.contains(&0) {
        return 0;
    }
    // dp[mask]: ways to fill the first popcount(mask) positions using exactly `mask`.
    let mut dp = vec![0u64; 1 << d];
    dp[0] = 1;
    for mask in 0u32..(1 << d) {
        let ways = dp[mask as usize];
        if ways == 0 {
            continue;
        }
        let pos = mask.count_ones() as usize;
        if pos == d {
            continue;
        }
        let mut free = allowed[pos] & !mask;
        while free != 0 {
            let bit = free & free.wrapping_neg();
            dp[(mask | bit) as usize] += ways;
            free ^= bit;
        }
    }
    dp[(1 << d) - 1]
}

fn check_range(h: &Hypergraph, form: &TupleForm) -> Result<()> {
    if form.d() != h.d() {
        return Err(Error::Arity { expected: h.d(), found: form.d() });
    }
    match form.max_vertex() {
        Some(v) => h.check_vertex(v),
        None => Ok(()),
    }
}

/// m(A_1..A_d) for a general tuple or m(A_1^[a_1]..A_s^[a_s]) for a compact
/// one, by scanning every hyperedge.
///
/// For a general tuple this counts hyperedges that admit at least one
/// placement with exactly one vertex in each `A_i`.
pub fn brute_count(h: &Hypergraph, form: &TupleForm) -> Result<u64> {
    check_range(h, form)?;
    let count = match form {
        TupleForm::Compact(t) => {
            let parts = t.part_refs();
            h.edges().filter(|e| edge_matches_compact(e, &parts)).count()
        }
        TupleForm::General(t) => {
            let sets = t.set_refs();
            h.edges().filter(|e| assignment_count(e, &sets) > 0).count()
        }
    };
    Ok(count as u64)
}

/// m_o, the number of ordered hyperedges, by scanning every hyperedge.
pub fn brute_ordered_count(h: &Hypergraph, form: &TupleForm) -> Result<u64> {
    check_range(h, form)?;
    let general = form.to_general();
    let sets = general.set_refs();
    Ok(h.edges().map(|e| assignment_count(e, &sets)).sum())
}

/// Converts an unordered count to an ordered one: `m * prod a_i!`.
pub fn ordered_count(m: u64, multiplicities: &[usize]) -> Result<u64> {
    let d: usize = multiplicities.iter().sum();
    if multiplicities.is_empty() || multiplicities.iter().any(|&a| a == 0 || a > d) {
        return Err(Error::InvalidMultiplicities { multiplicities: multiplicities.to_vec(), d });
    }
    multiplicities
        .iter()
        .try_fold(m, |acc, &a| acc.checked_mul(factorial(a as u64)?))
        .ok_or(Error::Overflow("ordered count"))
}

/// `n!`, or `None` on overflow.
pub fn factorial(n: u64) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

const LOOKUP_COST: u128 = 8;

fn incidence_weight(h: &Hypergraph, set: &[Vertex]) -> usize {
    set.iter().map(|&v| h.incident(v).len()).sum()
}

/// Vertex-to-part table reused across queries, so an edge can be checked
/// against a compact tuple in `O(d)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Membership {
    stamp: Vec<u32>,
    owner: Vec<u32>,
    generation: u32,
    tally: Vec<usize>,
}

impl Membership {
    fn load(&mut self, n: usize, parts: &[PartRef<'_>]) {
        if self.stamp.len() != n {
            self.stamp = vec![0; n];
            self.owner = vec![0; n];
            self.generation = 0;
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        for (i, p) in parts.iter().enumerate() {
            for &v in p.set {
                self.stamp[v as usize] = self.generation;
                self.owner[v as usize] = i as u32;
            }
        }
        self.tally.clear();
        self.tally.resize(parts.len(), 0);
    }

    fn matches(&mut self, edge: &[Vertex], parts: &[PartRef<'_>]) -> bool {
        self.tally.iter_mut().for_each(|t| *t = 0);
        for &v in edge {
            if self.stamp[v as usize] != self.generation {
                return false;
            }
            self.tally[self.owner[v as usize] as usize] += 1;
        }
        self.tally.iter().zip(parts).all(|(&t, p)| t == p.multiplicity)
    }
}

/// Whether some hyperedge has exactly `a_i` vertices in each `A_i`.
///
/// Parts must already be validated (disjoint, in range, summing to d).
pub(crate) fn exists_compact(h: &Hypergraph, parts: &[PartRef<'_>], scratch: &mut Membership) -> bool {
    if parts.iter().any(|p| p.set.len() < p.multiplicity) {
        return false;
    }
    let (pivot, weight) = parts
        .iter()
        .map(|p| (p, incidence_weight(h, p.set)))
        .min_by_key(|&(_, w)| w)
        .expect("validated parts are non-empty");
    // Few candidate vertex sets: look each one up instead of scanning edges.
    // A lookup costs about as much as scanning a handful of edges.
    let candidates = parts.iter().try_fold(LOOKUP_COST, |acc, p| {
        let c = binomial(p.set.len() as u64, p.multiplicity as u64);
        acc.checked_mul(c).filter(|&x| x <= weight as u128)
    });
    if candidates.is_some() {
        let (mut chosen, mut sorted) = (Vec::with_capacity(h.d()), Vec::with_capacity(h.d()));
        return any_candidate_edge(h, parts, &mut chosen, &mut sorted);
    }
    scratch.load(h.n(), parts);
    pivot
        .set
        .iter()
        .any(|&v| h.incident(v).iter().any(|&id| scratch.matches(h.edge(id as usize), parts)))
}

/// Tries every way of picking `a_i` vertices from each `A_i`.
fn any_candidate_edge(
    h: &Hypergraph,
    parts: &[PartRef<'_>],
    chosen: &mut Vec<Vertex>,
    sorted: &mut Vec<Vertex>,
) -> bool {
    let Some((first, rest)) = parts.split_first() else {
        sorted.clear();
        sorted.extend_from_slice(chosen);
        sorted.sort_unstable();
        return h.contains_edge(sorted);
    };
    let mark = chosen.len();
    let mut found = false;
    if first.multiplicity == 1 {
        for &v in first.set {
            chosen.push(v);
            found = any_candidate_edge(h, rest, chosen, sorted);
            chosen.truncate(mark);
            if found {
                break;
            }
        }
        return found;
    }
    crate::generate::for_each_subset(first.set.len(), first.multiplicity, |idx| {
        if found {
            return;
        }
        chosen.extend(idx.iter().map(|&i| first.set[i]));
        found = any_candidate_edge(h, rest, chosen, sorted);
        chosen.truncate(mark);
    });
    found
}

/// Whether some hyperedge admits a placement with one vertex in each `A_i`.
pub(crate) fn exists_general(h: &Hypergraph, sets: &[&[Vertex]]) -> bool {
    if sets.len() != h.d() || sets.iter().any(|s| s.is_empty()) {
        return false;
    }
    let pivot = sets
        .iter()
        .min_by_key(|s| incidence_weight(h, s))
        .expect("non-empty");
    pivot.iter().any(|&v| {
        h.incident(v)
            .iter()
            .any(|&id| assignment_count(h.edge(id as usize), sets) > 0)
    })
}

/// Validates borrowed compact parts against `h`, returning an error on
/// overlap, bad multiplicities or out-of-range vertices.
pub(crate) fn check_parts(h: &Hypergraph, parts: &[PartRef<'_>]) -> Result<()> {
    let d = validate_parts(parts)?;
    if d != h.d() {
        return Err(Error::InvalidMultiplicities {
            multiplicities: parts.iter().map(|p| p.multiplicity).collect(),
            d: h.d(),
        });
    }
    for p in parts {
        if let Some(&v) = p.set.last() {
            h.check_vertex(v)?;
        }
    }
    Ok(())
}

pub(crate) fn check_sets(h: &Hypergraph, sets: &[&[Vertex]]) -> Result<()> {
    if sets.len() != h.d() {
        return Err(Error::Arity { expected: h.d(), found: sets.len() });
    }
    for s in sets {
        if let Some(&v) = s.last() {
            h.check_vertex(v)?;
        }
    }
    Ok(())
}
