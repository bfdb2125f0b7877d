//! Vertex sets and partite tuples.
//!
//! A partite tuple names a d-partite sub-hypergraph. It comes in two shapes:
//!
//! * **compact**: pairwise-disjoint sets `A_1..A_s` with multiplicities
//!   `a_1..a_s`, written `A_1^[a_1], ..., A_s^[a_s]`, where `sum a_i = d`;
//! * **general**: any `d` sets `A_1..A_d`, possibly overlapping.
//!
//! Every compact tuple expands to a general one by repeating each set
//! `a_i` times. A general tuple whose sets are pairwise equal-or-disjoint
//! folds back into compact form.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::Vertex;

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    /// `0..n` as a set.
    pub fn range(n: usize) -> Self {
        Self((0..n as Vertex).collect())
    }

    /// Wraps an already sorted, duplicate-free vector.
    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Self(v)
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.0.last().copied()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        Self::new(iter)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        Self::new(v)
    }
}

/// Whether two sorted slices share no element.
pub fn sorted_disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Borrowed view of one compact-form part `A^[a]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartRef<'a> {
    pub set: &'a [Vertex],
    pub multiplicity: usize,
}

/// One part `A^[a]` of a compact tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Part {
    pub set: VertexSet,
    pub multiplicity: usize,
}

impl Part {
    pub fn new(set: impl Into<VertexSet>, multiplicity: usize) -> Self {
        Self { set: set.into(), multiplicity }
    }

    pub fn as_ref(&self) -> PartRef<'_> {
        PartRef { set: self.set.as_slice(), multiplicity: self.multiplicity }
    }
}

/// Checks the compact-form invariants on borrowed parts and returns `d`.
pub fn validate_parts(parts: &[PartRef<'_>]) -> Result<usize> {
    let d: usize = parts.iter().map(|p| p.multiplicity).sum();
    if parts.is_empty() || parts.iter().any(|p| p.multiplicity == 0) {
        return Err(Error::InvalidMultiplicities {
            multiplicities: parts.iter().map(|p| p.multiplicity).collect(),
            d,
        });
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !sorted_disjoint(parts[i].set, parts[j].set) {
                return Err(Error::NotDisjoint { first: i, second: j });
            }
        }
    }
    Ok(d)
}

/// `A_1^[a_1], ..., A_s^[a_s]` with pairwise-disjoint `A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactTuple {
    parts: Vec<Part>,
}

impl CompactTuple {
    pub fn new(parts: Vec<Part>) -> Result<Self> {
        let refs: Vec<PartRef<'_>> = parts.iter().map(Part::as_ref).collect();
        validate_parts(&refs)?;
        Ok(Self { parts })
    }

    /// `U^[d]` over the vertex range `0..n`.
    pub fn whole(n: usize, d: usize) -> Self {
        Self { parts: vec![Part::new(VertexSet::range(n), d)] }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part_refs(&self) -> Vec<PartRef<'_>> {
        self.parts.iter().map(Part::as_ref).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.multiplicity).collect()
    }

    /// The uniformity `d = sum a_i`.
    pub fn d(&self) -> usize {
        self.parts.iter().map(|p| p.multiplicity).sum()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.parts.iter().filter_map(|p| p.set.max_vertex()).max()
    }

    /// Repeats each set `a_i` times.
    pub fn to_general(&self) -> GeneralTuple {
        GeneralTuple {
            sets: self
                .parts
                .iter()
                .flat_map(|p| std::iter::repeat_n(p.set.clone(), p.multiplicity))
                .collect(),
        }
    }
}

/// Any `d` vertex sets `A_1..A_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralTuple {
    sets: Vec<VertexSet>,
}

impl GeneralTuple {
    pub fn new(sets: Vec<VertexSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Arity { expected: 1, found: 0 });
        }
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn set_refs(&self) -> Vec<&[Vertex]> {
        self.sets.iter().map(VertexSet::as_slice).collect()
    }

    pub fn d(&self) -> usize {
        self.sets.len()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.sets.iter().filter_map(VertexSet::max_vertex).max()
    }

    /// Groups equal sets into multiplicities, in order of first appearance.
    ///
    /// Returns `None` when two sets overlap without being equal.
    pub fn to_compact(&self) -> Option<CompactTuple> {
        let mut parts: Vec<Part> = Vec::new();
        for set in &self.sets {
            if let Some(p) = parts.iter_mut().find(|p| &p.set == set) {
                p.multiplicity += 1;
                continue;
            }
            if parts.iter().any(|p| !sorted_disjoint(p.set.as_slice(), set.as_slice())) {
                return None;
            }
            parts.push(Part::new(set.clone(), 1));
        }
        Some(CompactTuple { parts })
    }
}

/// The two shapes a tuple can take.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TupleForm {
    Compact(CompactTuple),
    General(GeneralTuple),
}

impl TupleForm {
    pub fn d(&self) -> usize {
        match self {
            TupleForm::Compact(t) => t.d(),
            TupleForm::General(t) => t.d(),
        }
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        match self {
            TupleForm::Compact(t) => t.max_vertex(),
            TupleForm::General(t) => t.max_vertex(),
        }
    }

    pub fn to_general(&self) -> GeneralTuple {
        match self {
            TupleForm::Compact(t) => t.to_general(),
            TupleForm::General(t) => t.clone(),
        }
    }
}

/// A tuple together with its weight `w >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteTuple {
    pub form: TupleForm,
    pub weight: BigRational,
}

impl PartiteTuple {
    pub fn new(form: TupleForm, weight: BigRational) -> Result<Self> {
        if weight < BigRational::one() {
            return Err(Error::InvalidParameter(format!("tuple weight {weight} is below 1")));
        }
        Ok(Self { form, weight })
    }

    pub fn unit(form: TupleForm) -> Self {
        Self { form, weight: BigRational::one() }
    }

    pub fn compact(t: CompactTuple) -> Self {
        Self::unit(TupleForm::Compact(t))
    }

    pub fn general(t: GeneralTuple) -> Self {
        Self::unit(TupleForm::General(t))
    }
}
