//! Colour-coding sparsification of one weighted tuple.
//!
//! Vertices get independent uniform colours in `[k]` and a random hash
//! `h: [k]^d -> {0,1}` with `P[h = 1] = 1/k` keeps some colour patterns. The
//! tuple is replaced by the colour-class tuples of the kept patterns, each
//! with weight `k * w`, so the weighted ordered count is preserved in
//! expectation while the number of ordered hyperedges per tuple drops by a
//! factor of about `k`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::{mix64, prf};
use crate::tuple::{CompactTuple, GeneralTuple, PartiteTuple, TupleForm, VertexSet};
use crate::Vertex;

/// Pseudorandom `h_d: [k]^d -> {0,1}` with `P[h = 1] = 1/k` per pattern.
///
/// A pattern is kept when a 64-bit keyed value falls below `floor(2^64/k)`,
/// so the bias differs from `1/k` by less than `2^-63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HdHash {
    k: u64,
    d: usize,
    rule: HashRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HashRule {
    Keyed { key: u64, cutoff: u128 },
    Constant(bool),
}

impl HdHash {
    pub fn new(k: u64, d: usize, seed: u64) -> Result<Self> {
        check_k(k)?;
        let cutoff = (1u128 << 64) / k as u128;
        Ok(Self { k, d, rule: HashRule::Keyed { key: seed, cutoff } })
    }

    /// A hash that is `bit` everywhere; for tests.
    pub fn constant(k: u64, d: usize, bit: bool) -> Self {
        Self { k, d, rule: HashRule::Constant(bit) }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn eval(&self, colors: &[u32]) -> bool {
        debug_assert_eq!(colors.len(), self.d);
        match self.rule {
            HashRule::Constant(bit) => bit,
            HashRule::Keyed { key, cutoff } => {
                let x = colors
                    .iter()
                    .fold(colors.len() as u64, |acc, &c| mix64(acc ^ mix64(c as u64 + 1)));
                (prf(key, x) as u128) < cutoff
            }
        }
    }
}

/// Independent uniform colour in `[k]` for every vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coloring {
    k: u64,
    key: u64,
}

impl Coloring {
    pub fn new(k: u64, seed: u64) -> Result<Self> {
        check_k(k)?;
        Ok(Self { k, key: seed })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn color(&self, v: Vertex) -> u32 {
        ((prf(self.key, v as u64) as u128 * self.k as u128) >> 64) as u32
    }

    /// `chi(set, j)` for every `j`, each class sorted.
    pub fn classes(&self, set: &[Vertex]) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.k as usize];
        for &v in set {
            out[self.color(v) as usize].push(v);
        }
        out
    }
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of colours k must be at least 1".into()));
    }
    if k > u32::MAX as u64 {
        return Err(Error::InvalidParameter(format!("k = {k} is too large")));
    }
    Ok(())
}

/// Sparsifies `t` with freshly keyed hash and colouring.
pub fn sparsify(t: &PartiteTuple, k: u64, hash_seed: u64, color_seed: u64) -> Result<Vec<PartiteTuple>> {
    let compact = as_compact(&t.form)?;
    let hash = HdHash::new(k, compact.d(), hash_seed)?;
    let coloring = Coloring::new(k, color_seed)?;
    Ok(sparsify_with(&compact, &t.weight, &hash, &coloring)
        .into_iter()
        .map(|(child, weight)| PartiteTuple { form: TupleForm::General(child), weight })
        .collect())
}

fn as_compact(form: &TupleForm) -> Result<CompactTuple> {
    match form {
        TupleForm::Compact(c) => Ok(c.clone()),
        TupleForm::General(g) => g.to_compact().ok_or_else(|| {
            Error::InvalidParameter("sparsification needs sets that are equal or disjoint".into())
        }),
    }
}

/// Children of `t` in lexicographic colour-pattern order, each with weight
/// `k * weight`. Patterns whose classes cannot host an ordered hyperedge
/// (an empty class, or a class used more often than it has vertices) are
/// skipped; they carry no ordered hyperedges.
pub fn sparsify_with(
    t: &CompactTuple,
    weight: &BigRational,
    hash: &HdHash,
    coloring: &Coloring,
) -> Vec<(GeneralTuple, BigRational)> {
    let k = coloring.k() as usize;
    let child_weight = weight * BigRational::from_integer(BigInt::from(hash.k()));
    let classes: Vec<Vec<VertexSet>> = t
        .parts()
        .iter()
        .map(|p| coloring.classes(p.set.as_slice()).into_iter().map(VertexSet::from_sorted).collect())
        .collect();
    let owner: Vec<usize> = t
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, p)| std::iter::repeat_n(i, p.multiplicity))
        .collect();
    let d = owner.len();

    let mut out = Vec::new();
    let mut colors = vec![0u32; d];
    // used[part][color]: positions currently drawing from that class.
    let mut used = vec![vec![0usize; k]; classes.len()];
    let mut pos = 0usize;
    let mut next = 0usize;
    loop {
        if pos == d {
            if hash.eval(&colors) {
                let sets = (0..d).map(|p| classes[owner[p]][colors[p] as usize].clone()).collect();
                out.push((GeneralTuple::new(sets).expect("d >= 1"), child_weight.clone()));
            }
        } else if let Some(c) = (next..k).find(|&c| used[owner[pos]][c] < classes[owner[pos]][c].len()) {
            colors[pos] = c as u32;
            used[owner[pos]][c] += 1;
            pos += 1;
            next = 0;
            continue;
        }
        // Backtrack to the previous position and advance its colour.
        if pos == 0 {
            break;
        }
        pos -= 1;
        let c = colors[pos] as usize;
        used[owner[pos]][c] -= 1;
        next = c + 1;
    }
    out
}

/// Number of ordered hyperedges of `t` whose colour pattern the hash keeps,
/// by scanning every hyperedge and every placement of its vertices.
pub fn count_properly_colored(
    h: &Hypergraph,
    t: &TupleForm,
    hash: &HdHash,
    coloring: &Coloring,
) -> u64 {
    let general = t.to_general();
    let sets = general.set_refs();
    let d = sets.len();
    let mut total = 0;
    let mut perm: Vec<usize> = (0..d).collect();
    let mut colors = vec![0u32; d];
    for e in h.edges() {
        if e.len() != d {
            continue;
        }
        perm.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        loop {
            let fits = (0..d).all(|p| sets[p].binary_search(&e[perm[p]]).is_ok());
            if fits {
                for p in 0..d {
                    colors[p] = coloring.color(e[perm[p]]);
                }
                if hash.eval(&colors) {
                    total += 1;
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    total
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::brute_ordered_count;
    use crate::generate::{generate, GeneratorSpec};
    use num_traits::One;

    #[test]
    fn hash_is_pure_and_biased_by_k() {
        let h = HdHash::new(4, 2, 11).unwrap();
        assert_eq!(h.eval(&[1, 3]), h.eval(&[1, 3]));
        let kept = (0..20_000u32).filter(|&i| h.eval(&[i % 1000, i / 1000])).count();
        assert!((4_500..5_500).contains(&kept), "{kept}");
        assert!(HdHash::new(1, 3, 5).unwrap().eval(&[0, 0, 0]));
        assert!(HdHash::new(0, 3, 5).is_err());
    }

    #[test]
    fn k_one_is_identity() {
        let h = generate(&GeneratorSpec::random(12, 2, 10, 3)).unwrap();
        let t = PartiteTuple::compact(CompactTuple::whole(12, 2));
        let children = sparsify(&t, 1, 7, 8).unwrap();
        assert_eq!(children.len(), 1);
        assert_eq!(children[0].form.to_general(), CompactTuple::whole(12, 2).to_general());
        assert!(children[0].weight.is_one());
        let ordered = brute_ordered_count(&h, &children[0].form).unwrap();
        assert_eq!(ordered, 20);
    }

    #[test]
    fn children_match_properly_colored_count() {
        let h = generate(&GeneratorSpec::random(16, 3, 120, 2)).unwrap();
        let t = CompactTuple::whole(16, 3);
        for seed in 0..10 {
            let hash = HdHash::new(4, 3, seed).unwrap();
            let coloring = Coloring::new(4, seed + 100).unwrap();
            let children = sparsify_with(&t, &BigRational::one(), &hash, &coloring);
            let sum: u64 = children
                .iter()
                .map(|(c, _)| brute_ordered_count(&h, &TupleForm::General(c.clone())).unwrap())
                .sum();
            let direct = count_properly_colored(&h, &TupleForm::Compact(t.clone()), &hash, &coloring);
            assert_eq!(sum, direct);
            for (c, w) in &children {
                assert!(c.to_compact().is_some());
                assert_eq!(*w, BigRational::from_integer(4.into()));
            }
        }
    }

    #[test]
    fn constant_zero_hash_keeps_nothing() {
        let h = generate(&GeneratorSpec::random(10, 2, 12, 1)).unwrap();
        let t = CompactTuple::whole(10, 2);
        let hash = HdHash::constant(4, 2, false);
        let coloring = Coloring::new(4, 1).unwrap();
        assert!(sparsify_with(&t, &BigRational::one(), &hash, &coloring).is_empty());
        assert_eq!(count_properly_colored(&h, &TupleForm::Compact(t), &hash, &coloring), 0);
    }

    #[test]
    fn same_seeds_same_children() {
        let t = PartiteTuple::compact(CompactTuple::whole(30, 3));
        assert_eq!(sparsify(&t, 4, 1, 2).unwrap(), sparsify(&t, 4, 1, 2).unwrap());
    }

    #[test]
    fn permutations_enumerate_all() {
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
