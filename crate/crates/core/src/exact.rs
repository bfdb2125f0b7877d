//! Exact ordered counting below a threshold.
//!
//! The search tree starts at the query tuple and repeatedly halves every
//! set. A node is a list of `d` positions, each a contiguous range of one
//! sorted part of the input tuple; positions holding the same range form one
//! compact part of the node's `gpis1` query. Because sibling ranges are
//! either equal or disjoint, every node is a valid compact tuple.
//!
//! Only nodes whose query says Yes are expanded. A Yes node made of `d`
//! distinct singletons is exactly one ordered hyperedge, so the ordered
//! count is the number of such leaves. If the tree grows past
//! `2^(d+2) * tau * L` nodes (`L = max(1, ceil(log2 n))`), the count must
//! exceed `tau` and the search stops.

use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::tuple::{CompactTuple, PartRef};
use crate::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Exact(u64),
    ExceedsThreshold,
}

/// Outcome plus the size of the tree that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactTrace {
    pub outcome: ExactOutcome,
    /// Nodes inserted, including the root and size-violating children.
    pub nodes: u64,
    pub queries: u64,
    pub max_depth: usize,
}

/// `max(1, ceil(log2 n))`, the logarithm used throughout the crate.
pub fn log2_ceil(n: usize) -> u32 {
    if n <= 2 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Maximum number of tree nodes before giving up.
pub fn node_budget(n: usize, d: usize, tau: u64) -> u64 {
    let factor = 1u64.checked_shl(d as u32 + 2).unwrap_or(u64::MAX);
    factor.saturating_mul(tau).saturating_mul(log2_ceil(n) as u64)
}

/// First `ceil(len/2)` elements and the rest.
pub fn split_halves(set: &[Vertex]) -> (&[Vertex], &[Vertex]) {
    set.split_at(set.len().div_ceil(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    part: u32,
    lo: u32,
    hi: u32,
}

impl Pos {
    fn len(self) -> u32 {
        self.hi - self.lo
    }
}

/// Decides whether `m_o(t) <= tau` and returns it exactly if so.
pub fn exact_count_or_exceeds(
    o: &mut Oracle<'_>,
    t: &CompactTuple,
    tau: u64,
) -> Result<ExactOutcome> {
    exact_count_traced(o, t, tau).map(|tr| tr.outcome)
}

pub fn exact_count_traced(o: &mut Oracle<'_>, t: &CompactTuple, tau: u64) -> Result<ExactTrace> {
    if tau == 0 {
        return Err(Error::InvalidParameter("threshold tau must be at least 1".into()));
    }
    let d = o.d();
    if t.d() != d {
        return Err(Error::InvalidMultiplicities { multiplicities: t.multiplicities(), d });
    }
    let sets: Vec<&[Vertex]> = t.parts().iter().map(|p| p.set.as_slice()).collect();
    let budget = node_budget(o.n(), d, tau);

    let root: Vec<Pos> = t
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            std::iter::repeat_n(Pos { part: i as u32, lo: 0, hi: p.set.len() as u32 }, p.multiplicity)
        })
        .collect();

    let mut trace =
        ExactTrace { outcome: ExactOutcome::Exact(0), nodes: 1, queries: 0, max_depth: 0 };
    let mut leaves = 0u64;
    let mut stack: Vec<(Vec<Pos>, usize)> = Vec::new();

    match label(o, &sets, &root, &mut trace)? {
        Label::Zero => return Ok(trace),
        Label::Leaf => leaves += 1,
        Label::Expand => stack.push((root, 0)),
    }

    let mut child = vec![Pos { part: 0, lo: 0, hi: 0 }; d];
    while let Some((node, depth)) = stack.pop() {
        // Positions holding a singleton have only one non-empty half.
        let splittable: Vec<usize> = (0..d).filter(|&i| node[i].len() > 1).collect();
        for choice in 0u64..(1u64 << splittable.len()) {
            child.copy_from_slice(&node);
            for (bit, &i) in splittable.iter().enumerate() {
                let p = node[i];
                let mid = p.lo + p.len().div_ceil(2);
                child[i] = if choice >> bit & 1 == 0 {
                    Pos { hi: mid, ..p }
                } else {
                    Pos { lo: mid, ..p }
                };
            }
            trace.nodes += 1;
            if trace.nodes > budget {
                trace.outcome = ExactOutcome::ExceedsThreshold;
                return Ok(trace);
            }
            trace.max_depth = trace.max_depth.max(depth + 1);
            match label(o, &sets, &child, &mut trace)? {
                Label::Zero => {}
                Label::Leaf => {
                    leaves += 1;
                    if leaves > tau {
                        trace.outcome = ExactOutcome::ExceedsThreshold;
                        return Ok(trace);
                    }
                }
                Label::Expand => stack.push((child.clone(), depth + 1)),
            }
        }
    }
    trace.outcome = ExactOutcome::Exact(leaves);
    Ok(trace)
}

enum Label {
    Zero,
    Leaf,
    Expand,
}

fn label(
    o: &mut Oracle<'_>,
    sets: &[&[Vertex]],
    node: &[Pos],
    trace: &mut ExactTrace,
) -> Result<Label> {
    let mut groups: Vec<(Pos, usize)> = Vec::with_capacity(node.len());
    for &p in node {
        match groups.iter_mut().find(|(q, _)| *q == p) {
            Some((_, mult)) => *mult += 1,
            None => groups.push((p, 1)),
        }
    }
    if groups.iter().any(|&(p, mult)| (p.len() as usize) < mult) {
        return Ok(Label::Zero);
    }
    let parts: Vec<PartRef<'_>> = groups
        .iter()
        .map(|&(p, multiplicity)| PartRef {
            set: &sets[p.part as usize][p.lo as usize..p.hi as usize],
            multiplicity,
        })
        .collect();
    trace.queries += 1;
    if !o.gpis1(&parts)? {
        return Ok(Label::Zero);
    }
    if groups.iter().all(|&(p, _)| p.len() == 1) {
        Ok(Label::Leaf)
    } else {
        Ok(Label::Expand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorSpec};
    use crate::hypergraph::Hypergraph;
    use crate::tuple::{Part, VertexSet};

    #[test]
    fn logarithm_convention() {
        assert_eq!(log2_ceil(1), 1);
        assert_eq!(log2_ceil(2), 1);
        assert_eq!(log2_ceil(3), 2);
        assert_eq!(log2_ceil(1024), 10);
        assert_eq!(log2_ceil(1025), 11);
    }

    #[test]
    fn halves_take_the_ceiling_first() {
        assert_eq!(split_halves(&[1, 2, 3, 4, 5]), (&[1, 2, 3][..], &[4, 5][..]));
        assert_eq!(split_halves(&[7]), (&[7][..], &[][..]));
    }

    #[test]
    fn empty_family_is_exact_zero_with_one_query() {
        let h = Hypergraph::empty(8, 3).unwrap();
        let mut o = Oracle::direct(&h);
        let tr = exact_count_traced(&mut o, &CompactTuple::whole(8, 3), 10).unwrap();
        assert_eq!(tr.outcome, ExactOutcome::Exact(0));
        assert_eq!(o.counts().gpis1, 1);
    }

    #[test]
    fn single_edge_under_full_multiplicity() {
        let h = Hypergraph::new(8, 3, [[0, 1, 2]]).unwrap();
        let mut o = Oracle::direct(&h);
        let out = exact_count_or_exceeds(&mut o, &CompactTuple::whole(8, 3), 10).unwrap();
        assert_eq!(out, ExactOutcome::Exact(6));
    }

    #[test]
    fn planted_clique_exceeds_small_threshold() {
        let h = generate(&GeneratorSpec::planted_clique(16, 2, 6, 1)).unwrap();
        let mut o = Oracle::direct(&h);
        let t = CompactTuple::whole(16, 2);
        assert_eq!(exact_count_or_exceeds(&mut o, &t, 10).unwrap(), ExactOutcome::ExceedsThreshold);
        assert_eq!(exact_count_or_exceeds(&mut o, &t, 30).unwrap(), ExactOutcome::Exact(30));
    }

    #[test]
    fn root_size_violation_needs_no_query() {
        let h = Hypergraph::new(8, 3, [[0, 1, 2]]).unwrap();
        let mut o = Oracle::direct(&h);
        let t = CompactTuple::new(vec![Part::new(VertexSet::new([0, 1]), 3)]).unwrap();
        assert_eq!(exact_count_or_exceeds(&mut o, &t, 5).unwrap(), ExactOutcome::Exact(0));
        assert_eq!(o.counts().total(), 0);
    }

    #[test]
    fn zero_threshold_is_rejected() {
        let h = Hypergraph::empty(4, 2).unwrap();
        let mut o = Oracle::direct(&h);
        assert!(exact_count_or_exceeds(&mut o, &CompactTuple::whole(4, 2), 0).is_err());
    }
}
