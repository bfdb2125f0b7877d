//! Subset-query access to a hidden hypergraph.
//!
//! [`Oracle::gpis`] is the only primitive the estimator needs. The two
//! relaxed query kinds are either simulated on top of it (`Simulated`) or
//! answered exactly from the hypergraph (`Direct`), which lets tests tell
//! estimation error apart from simulation error.
//!
//! * `gpis1` takes a compact tuple `A_1^[a_1]..A_s^[a_s]`. Simulated, it
//!   randomly splits each `A_i` into `a_i` labelled parts and asks one GPIS
//!   query per round. A Yes is always correct; a No can be wrong.
//! * `gpis2` takes arbitrary, possibly overlapping sets. Simulated, it
//!   splits the union into atoms by membership pattern and asks one `gpis1`
//!   per combination of atoms.

use std::collections::{BTreeMap, HashSet};
use std::ops::{Add, AddAssign, Sub};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::count::{check_parts, check_sets, exists_compact, exists_general, Membership};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng;
use crate::tuple::{sorted_disjoint, PartRef};
use crate::Vertex;

/// How `gpis1` and `gpis2` are answered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Reduce to GPIS queries.
    Simulated,
    /// Answer exactly from the hypergraph.
    #[default]
    Direct,
}

impl OracleMode {
    pub fn name(self) -> &'static str {
        match self {
            OracleMode::Simulated => "simulated",
            OracleMode::Direct => "direct",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub simulate_gpis1: bool,
    pub simulate_gpis2: bool,
    /// Rounds per simulated `gpis1` call.
    pub gpis1_reps: u64,
}

impl OracleConfig {
    pub fn new(mode: OracleMode, gpis1_reps: u64) -> Self {
        let sim = mode == OracleMode::Simulated;
        Self { simulate_gpis1: sim, simulate_gpis2: sim, gpis1_reps }
    }

    pub fn direct() -> Self {
        Self::new(OracleMode::Direct, 1)
    }

    pub fn simulated(n: usize, d: usize) -> Self {
        Self::new(OracleMode::Simulated, default_gpis1_reps(n, d))
    }

    pub fn mode(&self) -> OracleMode {
        if self.simulate_gpis1 || self.simulate_gpis2 {
            OracleMode::Simulated
        } else {
            OracleMode::Direct
        }
    }
}

/// `ceil(d^d * (5 + ln n))`: a simulated `gpis1` misses an existing edge with
/// probability at most `e^-5 / n`.
pub fn default_gpis1_reps(n: usize, d: usize) -> u64 {
    let dd = (d as f64).powi(d as i32);
    (dd * (5.0 + (n.max(1) as f64).ln())).ceil() as u64
}

/// Number of queries of each kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub gpis: u64,
    pub gpis1: u64,
    pub gpis2: u64,
}

impl QueryCounts {
    /// All queries regardless of kind.
    pub fn total(&self) -> u64 {
        self.gpis + self.gpis1 + self.gpis2
    }
}

impl Add for QueryCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { gpis: self.gpis + o.gpis, gpis1: self.gpis1 + o.gpis1, gpis2: self.gpis2 + o.gpis2 }
    }
}

impl AddAssign for QueryCounts {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for QueryCounts {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { gpis: self.gpis - o.gpis, gpis1: self.gpis1 - o.gpis1, gpis2: self.gpis2 - o.gpis2 }
    }
}

/// Counter snapshot plus elapsed wall time since creation or last reset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryStats {
    pub gpis: u64,
    pub gpis1: u64,
    pub gpis2: u64,
    pub wall_ms: f64,
}

impl QueryStats {
    pub fn counts(&self) -> QueryCounts {
        QueryCounts { gpis: self.gpis, gpis1: self.gpis1, gpis2: self.gpis2 }
    }
}

/// Query handle over a hidden hypergraph. Single owner; use [`Oracle::fork`]
/// for independent handles and [`Oracle::absorb`] to merge their counts.
pub struct Oracle<'h> {
    h: &'h Hypergraph,
    config: OracleConfig,
    seed: u64,
    rng: ChaCha8Rng,
    counts: QueryCounts,
    started: Instant,
    scratch: Membership,
}

impl<'h> Oracle<'h> {
    pub fn new(h: &'h Hypergraph, config: OracleConfig, seed: u64) -> Self {
        Self {
            h,
            config,
            seed,
            rng: rng::stream(seed, &[]),
            counts: QueryCounts::default(),
            started: Instant::now(),
            scratch: Membership::default(),
        }
    }

    pub fn direct(h: &'h Hypergraph) -> Self {
        Self::new(h, OracleConfig::direct(), 0)
    }

    /// Number of vertices; public knowledge, unlike the hyperedges.
    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn d(&self) -> usize {
        self.h.d()
    }

    pub fn config(&self) -> OracleConfig {
        self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn snapshot(&self) -> QueryStats {
        QueryStats {
            gpis: self.counts.gpis,
            gpis1: self.counts.gpis1,
            gpis2: self.counts.gpis2,
            wall_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn reset(&mut self) {
        self.counts = QueryCounts::default();
        self.started = Instant::now();
    }

    /// A fresh handle over the same hypergraph with zeroed counters and a
    /// randomness stream derived from this handle's seed and `labels`.
    pub fn fork(&self, labels: &[u64]) -> Oracle<'h> {
        Oracle::new(self.h, self.config, rng::derive_seed(self.seed, labels))
    }

    /// Adds counts spent on a forked handle.
    pub fn absorb(&mut self, spent: QueryCounts) {
        self.counts += spent;
    }

    /// Yes iff some hyperedge has exactly one vertex in each `A_i`.
    ///
    /// The sets must be sorted, pairwise disjoint and in range.
    pub fn gpis(&mut self, sets: &[&[Vertex]]) -> Result<bool> {
        check_sets(self.h, sets)?;
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if !sorted_disjoint(sets[i], sets[j]) {
                    return Err(Error::NotDisjoint { first: i, second: j });
                }
            }
        }
        Ok(self.raw_gpis(sets))
    }

    fn raw_gpis(&mut self, sets: &[&[Vertex]]) -> bool {
        self.counts.gpis += 1;
        if sets.iter().any(|s| s.is_empty()) {
            return false;
        }
        let parts: Vec<PartRef<'_>> =
            sets.iter().map(|&set| PartRef { set, multiplicity: 1 }).collect();
        exists_compact(self.h, &parts, &mut self.scratch)
    }

    /// Yes iff `m(A_1^[a_1], .., A_s^[a_s]) != 0`, using the configured
    /// number of rounds when simulated.
    pub fn gpis1(&mut self, parts: &[PartRef<'_>]) -> Result<bool> {
        self.gpis1_with_reps(parts, self.config.gpis1_reps)
    }

    pub fn gpis1_with_reps(&mut self, parts: &[PartRef<'_>], reps: u64) -> Result<bool> {
        check_parts(self.h, parts)?;
        if reps == 0 {
            return Err(Error::InvalidParameter("gpis1 needs at least one round".into()));
        }
        Ok(self.gpis1_unchecked(parts, reps))
    }

    fn gpis1_unchecked(&mut self, parts: &[PartRef<'_>], reps: u64) -> bool {
        self.counts.gpis1 += 1;
        if !self.config.simulate_gpis1 {
            return exists_compact(self.h, parts, &mut self.scratch);
        }
        if parts.iter().all(|p| p.multiplicity == 1) {
            let sets: Vec<&[Vertex]> = parts.iter().map(|p| p.set).collect();
            return self.raw_gpis(&sets);
        }
        let d = self.h.d();
        let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); d];
        for _ in 0..reps {
            buckets.iter_mut().for_each(Vec::clear);
            let mut base = 0;
            for p in parts {
                if p.multiplicity == 1 {
                    buckets[base].extend_from_slice(p.set);
                } else {
                    for &v in p.set {
                        let slot = self.rng.random_range(0..p.multiplicity);
                        buckets[base + slot].push(v);
                    }
                }
                base += p.multiplicity;
            }
            let sets: Vec<&[Vertex]> = buckets.iter().map(Vec::as_slice).collect();
            if self.raw_gpis(&sets) {
                return true;
            }
        }
        false
    }

    /// Yes iff some hyperedge can be placed with exactly one vertex in each
    /// (possibly overlapping) `A_i`.
    pub fn gpis2(&mut self, sets: &[&[Vertex]]) -> Result<bool> {
        check_sets(self.h, sets)?;
        self.counts.gpis2 += 1;
        if sets.iter().any(|s| s.is_empty()) {
            return Ok(false);
        }
        if !self.config.simulate_gpis2 {
            return Ok(exists_general(self.h, sets));
        }
        let reps = self.config.gpis1_reps;
        for combo in compact_subqueries(sets) {
            let parts: Vec<PartRef<'_>> = combo
                .iter()
                .map(|(atom, mult)| PartRef { set: atom, multiplicity: *mult })
                .collect();
            if self.gpis1_unchecked(&parts, reps) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Splits the union of `sets` into atoms (maximal vertex groups with the
/// same membership pattern), ordered by membership bitmask.
pub fn atoms(sets: &[&[Vertex]]) -> Vec<(u64, Vec<Vertex>)> {
    assert!(sets.len() <= 64, "at most 64 sets");
    let mut by_vertex: BTreeMap<Vertex, u64> = BTreeMap::new();
    for (i, s) in sets.iter().enumerate() {
        for &v in s.iter() {
            *by_vertex.entry(v).or_default() |= 1 << i;
        }
    }
    let mut by_mask: BTreeMap<u64, Vec<Vertex>> = BTreeMap::new();
    for (v, mask) in by_vertex {
        by_mask.entry(mask).or_default().push(v);
    }
    by_mask.into_iter().collect()
}

/// The distinct compact tuples obtained by choosing, for every position `i`,
/// one atom inside `A_i`, in lexicographic order of atom choices. Repeated
/// atoms become multiplicities.
pub fn compact_subqueries(sets: &[&[Vertex]]) -> Vec<Vec<(Vec<Vertex>, usize)>> {
    let atoms = atoms(sets);
    let d = sets.len();
    let choices: Vec<Vec<usize>> = (0..d)
        .map(|i| (0..atoms.len()).filter(|&a| atoms[a].0 >> i & 1 == 1).collect())
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut pick = vec![0usize; d];
    loop {
        let mut key: Vec<usize> = (0..d).map(|i| choices[i][pick[i]]).collect();
        key.sort_unstable();
        if seen.insert(key.clone()) {
            let mut parts: Vec<(Vec<Vertex>, usize)> = Vec::new();
            for chunk in key.chunk_by(|a, b| a == b) {
                parts.push((atoms[chunk[0]].1.clone(), chunk.len()));
            }
            out.push(parts);
        }
        // Odometer over the choice lists, last position fastest.
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::brute_count;
    use crate::tuple::{GeneralTuple, TupleForm, VertexSet};

    #[test]
    fn fresh_handle_counts_nothing() {
        let h = Hypergraph::empty(4, 2).unwrap();
        let o = Oracle::direct(&h);
        assert_eq!(o.counts(), QueryCounts::default());
    }

    #[test]
    fn gpis_answers_and_counts() {
        let h = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let mut o = Oracle::direct(&h);
        assert!(o.gpis(&[&[0], &[1], &[2]]).unwrap());
        assert_eq!(o.counts().gpis, 1);
        assert!(!o.gpis(&[&[0], &[1], &[]]).unwrap());
        assert!(matches!(o.gpis(&[&[0, 1], &[1], &[2]]), Err(Error::NotDisjoint { .. })));
        assert!(matches!(o.gpis(&[&[0], &[1], &[3]]), Err(Error::VertexOutOfRange { .. })));
        assert_eq!(o.counts().gpis, 2);
    }

    #[test]
    fn simulated_gpis1_on_no_instance_spends_every_round() {
        let h = Hypergraph::new(6, 2, [[0, 1]]).unwrap();
        let mut o = Oracle::new(&h, OracleConfig::new(OracleMode::Simulated, 7), 3);
        let set = [2, 3, 4, 5];
        assert!(!o.gpis1(&[PartRef { set: &set, multiplicity: 2 }]).unwrap());
        assert_eq!(o.counts(), QueryCounts { gpis: 7, gpis1: 1, gpis2: 0 });
    }

    #[test]
    fn unit_multiplicities_need_one_round() {
        let h = Hypergraph::new(6, 2, [[0, 1]]).unwrap();
        let mut o = Oracle::new(&h, OracleConfig::new(OracleMode::Simulated, 7), 3);
        let parts = [PartRef { set: &[0, 2], multiplicity: 1 }, PartRef { set: &[1], multiplicity: 1 }];
        assert!(o.gpis1(&parts).unwrap());
        assert_eq!(o.counts().gpis, 1);
        let parts = [PartRef { set: &[2, 3], multiplicity: 1 }, PartRef { set: &[1], multiplicity: 1 }];
        assert!(!o.gpis1(&parts).unwrap());
        assert_eq!(o.counts().gpis, 2);
    }

    #[test]
    fn gpis1_rejects_bad_multiplicities() {
        let h = Hypergraph::new(6, 3, [[0, 1, 2]]).unwrap();
        let mut o = Oracle::direct(&h);
        let err = o.gpis1(&[PartRef { set: &[0, 1, 2], multiplicity: 2 }]);
        assert!(matches!(err, Err(Error::InvalidMultiplicities { .. })));
    }

    #[test]
    fn shared_atom_becomes_multiplicity() {
        let h = Hypergraph::new(4, 2, [[0, 1]]).unwrap();
        let subs = compact_subqueries(&[&[0, 1, 2], &[0, 1, 2]]);
        assert_eq!(subs, vec![vec![(vec![0, 1, 2], 2)]]);
        for config in [OracleConfig::direct(), OracleConfig::simulated(4, 2)] {
            let mut o = Oracle::new(&h, config, 1);
            assert!(o.gpis2(&[&[0, 1, 2], &[0, 1, 2]]).unwrap());
        }
    }

    #[test]
    fn disjoint_input_collapses_to_one_gpis() {
        let h = Hypergraph::new(6, 3, [[0, 2, 4]]).unwrap();
        let mut o = Oracle::new(&h, OracleConfig::simulated(6, 3), 1);
        assert!(o.gpis2(&[&[0, 1], &[2, 3], &[4, 5]]).unwrap());
        assert_eq!(o.counts(), QueryCounts { gpis: 1, gpis1: 1, gpis2: 1 });
    }

    #[test]
    fn direct_gpis2_matches_brute_force() {
        let h = crate::generate::generate(&crate::generate::GeneratorSpec::random(10, 3, 30, 4)).unwrap();
        let mut r = rng::stream(5, &[]);
        let mut o = Oracle::direct(&h);
        for _ in 0..200 {
            let sets: Vec<VertexSet> = (0..3)
                .map(|_| VertexSet::new((0..10).filter(|_| r.random_bool(0.3))))
                .collect();
            let refs: Vec<&[Vertex]> = sets.iter().map(VertexSet::as_slice).collect();
            let truth = brute_count(&h, &TupleForm::General(GeneralTuple::new(sets.clone()).unwrap()))
                .unwrap()
                > 0;
            assert_eq!(o.gpis2(&refs).unwrap(), truth);
        }
    }

    #[test]
    fn fork_starts_from_zero() {
        let h = Hypergraph::new(3, 2, [[0, 1]]).unwrap();
        let mut o = Oracle::direct(&h);
        o.gpis(&[&[0], &[1]]).unwrap();
        let mut child = o.fork(&[1]);
        assert_eq!(child.counts().total(), 0);
        child.gpis(&[&[0], &[1]]).unwrap();
        o.absorb(child.counts());
        assert_eq!(o.counts().gpis, 2);
        o.reset();
        assert_eq!(o.counts().total(), 0);
    }
}
