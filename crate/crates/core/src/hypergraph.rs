//! Immutable d-uniform hypergraphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::Vertex;

/// A d-uniform hypergraph over the vertices `0..n`.
///
/// Hyperedges are stored as strictly increasing vertex sequences in one flat
/// buffer, sorted lexicographically, so two hypergraphs are equal exactly when
/// `n`, `d` and the buffers agree. A per-vertex incidence index backs the fast
/// (direct) oracle answers.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    edges: Vec<Vertex>,
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Builds a hypergraph, canonicalising vertex order inside each edge.
    ///
    /// Fails on wrong arity, repeated vertices, out-of-range ids and duplicate
    /// edges.
    pub fn new<I, E>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if d == 0 {
            return Err(Error::InvalidParameter("uniformity d must be at least 1".into()));
        }
        let mut rows: Vec<Vec<Vertex>> = Vec::new();
        for edge in edges {
            let edge = edge.as_ref();
            if edge.len() != d {
                return Err(Error::Arity { expected: d, found: edge.len() });
            }
            let mut row = edge.to_vec();
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex(row));
            }
            if let Some(&v) = row.last() {
                if v as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            rows.push(row);
        }
        rows.sort_unstable();
        if let Some(w) = rows.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].clone()));
        }
        Ok(Self::from_sorted_rows(n, d, rows))
    }

    /// A hypergraph on `n` vertices with no hyperedges.
    pub fn empty(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, std::iter::empty::<Vec<Vertex>>())
    }

    fn from_sorted_rows(n: usize, d: usize, rows: Vec<Vec<Vertex>>) -> Self {
        let mut edges = Vec::with_capacity(rows.len() * d);
        let mut incidence = vec![Vec::new(); n];
        for (id, row) in rows.into_iter().enumerate() {
            for &v in &row {
                incidence[v as usize].push(id as u32);
            }
            edges.extend(row);
        }
        Self { n, d, edges, incidence }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// m(H), the number of hyperedges.
    pub fn num_edges(&self) -> usize {
        self.edges.len() / self.d
    }

    pub fn edge(&self, id: usize) -> &[Vertex] {
        &self.edges[id * self.d..(id + 1) * self.d]
    }

    /// Hyperedges in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.edges.chunks_exact(self.d)
    }

    /// Ids of the hyperedges containing `v`.
    pub fn incident(&self, v: Vertex) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// Whether the (sorted) vertex sequence is a hyperedge.
    pub fn contains_edge(&self, sorted: &[Vertex]) -> bool {
        if sorted.len() != self.d {
            return false;
        }
        let m = self.num_edges();
        let (mut lo, mut hi) = (0usize, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(sorted) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("m", &self.num_edges())
            .finish()
    }
}
