//! Coarse estimation of `m_o` up to a polylogarithmic factor.
//!
//! [`verify_estimate`] tests a guess `R` by subsampling the `d` sets with
//! layered probabilities for every guess vector `j` and asking whether the
//! samples still span a hyperedge. [`coarse_estimate`] sweeps
//! `R = 2^(dL), .., 2, 1` and stops at the first guess accepted by more than
//! a `1/(10 * 2^d)` fraction of `Gamma` trials.
//!
//! For `d = 1` there is nothing to layer; the estimate comes from a doubling
//! search with the exact counter instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::exact::{exact_count_or_exceeds, log2_ceil, ExactOutcome};
use crate::oracle::Oracle;
use crate::tuple::{CompactTuple, GeneralTuple, Part};
use crate::Vertex;

/// `(j_1, .., j_{d-1})`, each in `0..=d*L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessVector {
    pub j: Vec<u32>,
}

impl GuessVector {
    /// Sampling probability of each of the `d` layers for guess `r_hat`.
    pub fn probabilities(&self, r_hat: f64, l: u32) -> Vec<f64> {
        let d = self.j.len() + 1;
        let mut p = Vec::with_capacity(d);
        p.push((2f64.powi(self.j[0] as i32) / r_hat).min(1.0));
        let dl = d as f64 * l as f64;
        for i in 1..d - 1 {
            let step = self.j[i] as i32 - self.j[i - 1] as i32;
            p.push((2f64.powi(step) * dl).min(1.0));
        }
        p.push(2f64.powi(-(self.j[d - 2] as i32)).min(1.0));
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoarseResult {
    /// `R / (d^(d-2) * 2^d)` for the accepted guess, or 0 if none was.
    pub estimate: BigRational,
    /// `log2` of the accepted guess `R`.
    pub accepted_exponent: Option<u32>,
    /// `verify_estimate` calls made over the whole sweep.
    pub trials_used: u64,
}

impl CoarseResult {
    pub fn estimate_f64(&self) -> f64 {
        ratio_to_f64(&self.estimate)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// `d * 4^d * 2000 * L`.
pub fn theoretical_gamma(n: usize, d: usize) -> u64 {
    (d as u64)
        .saturating_mul(4u64.saturating_pow(d as u32))
        .saturating_mul(2000)
        .saturating_mul(log2_ceil(n) as u64)
}

/// `ceil(40 * L)`.
pub fn practical_gamma(n: usize) -> u64 {
    40 * log2_ceil(n) as u64
}

/// Fills `out` with each element of `set` kept independently with
/// probability `p`, skipping geometrically between kept elements.
fn bernoulli_subset<R: Rng + ?Sized>(set: &[Vertex], p: f64, rng: &mut R, out: &mut Vec<Vertex>) {
    out.clear();
    if p >= 1.0 {
        out.extend_from_slice(set);
        return;
    }
    if p <= 0.0 || set.is_empty() {
        return;
    }
    let skip = Geometric::new(p).expect("0 < p < 1");
    let mut i = 0usize;
    loop {
        let gap = skip.sample(rng);
        let Some(next) = usize::try_from(gap).ok().and_then(|g| i.checked_add(g)) else {
            return;
        };
        if next >= set.len() {
            return;
        }
        out.push(set[next]);
        i = next + 1;
    }
}

/// One verification trial for guess `r_hat`. Walks every guess vector from
/// `(dL, .., dL)` down to `(0, .., 0)` and accepts as soon as one sampled
/// tuple still spans a hyperedge.
///
/// Every guess vector costs one `gpis2` query. Sampling stops at the first
/// empty layer; that query is still counted and answers No.
pub fn verify_estimate<R: Rng + ?Sized>(
    o: &mut Oracle<'_>,
    t: &GeneralTuple,
    r_hat: f64,
    rng: &mut R,
) -> Result<bool> {
    let d = t.d();
    if d != o.d() {
        return Err(Error::Arity { expected: o.d(), found: d });
    }
    if d < 2 {
        return Err(Error::InvalidParameter("layered verification needs d >= 2".into()));
    }
    if !(r_hat.is_finite() && r_hat > 0.0) {
        return Err(Error::InvalidParameter(format!("guess {r_hat} must be positive")));
    }
    let l = log2_ceil(o.n());
    let top = d as u32 * l;
    let sets = t.set_refs();
    let mut samples: Vec<Vec<Vertex>> = vec![Vec::new(); d];
    let mut guess = GuessVector { j: vec![top; d - 1] };
    loop {
        let p = guess.probabilities(r_hat, l);
        let mut filled = 0;
        for i in 0..d {
            bernoulli_subset(sets[i], p[i], rng, &mut samples[i]);
            filled = i + 1;
            if samples[i].is_empty() {
                break;
            }
        }
        let refs: Vec<&[Vertex]> =
            (0..d).map(|i| if i < filled { samples[i].as_slice() } else { &[][..] }).collect();
        if o.gpis2(&refs)? {
            return Ok(true);
        }
        if !decrement(&mut guess.j, top) {
            return Ok(false);
        }
    }
}

/// Descending odometer over `{0..=top}^len`, last coordinate fastest.
fn decrement(j: &mut [u32], top: u32) -> bool {
    for x in j.iter_mut().rev() {
        if *x > 0 {
            *x -= 1;
            return true;
        }
        *x = top;
    }
    false
}

/// Sweeps the guesses and returns the first accepted one, scaled down by
/// `d^(d-2) * 2^d`.
///
/// A guess is accepted when more than `gamma / (10 * 2^d)` of `gamma`
/// trials accept. Trials stop as soon as the verdict is settled either way,
/// which never changes it.
pub fn coarse_estimate<R: Rng + ?Sized>(
    o: &mut Oracle<'_>,
    t: &GeneralTuple,
    rng: &mut R,
    gamma: u64,
) -> Result<CoarseResult> {
    let d = t.d();
    if d != o.d() {
        return Err(Error::Arity { expected: o.d(), found: d });
    }
    if d == 1 {
        return doubling_estimate(o, t);
    }
    if gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be at least 1".into()));
    }
    let top = d as u32 * log2_ceil(o.n());
    let scale = 10u64 << d;
    // Smallest accept count with accepts * 10 * 2^d > gamma.
    let need = gamma / scale + 1;
    let mut trials_used = 0;
    for e in (0..=top).rev() {
        let r_hat = 2f64.powi(e as i32);
        let mut accepts = 0u64;
        for done in 0..gamma {
            if accepts >= need || accepts + (gamma - done) < need {
                break;
            }
            trials_used += 1;
            if verify_estimate(o, t, r_hat, rng)? {
                accepts += 1;
            }
        }
        if accepts >= need {
            let denom = BigInt::from(d).pow(d as u32 - 2) << d;
            let estimate = BigRational::new(BigInt::one() << e, denom);
            return Ok(CoarseResult { estimate, accepted_exponent: Some(e), trials_used });
        }
    }
    Ok(CoarseResult { estimate: BigRational::zero(), accepted_exponent: None, trials_used })
}

/// `d = 1`: run the exact counter with thresholds 1, 2, 4, .. until it
/// answers; the result is exact.
fn doubling_estimate(o: &mut Oracle<'_>, t: &GeneralTuple) -> Result<CoarseResult> {
    let set = t.sets()[0].clone();
    if set.is_empty() {
        return Ok(CoarseResult { estimate: BigRational::zero(), accepted_exponent: None, trials_used: 0 });
    }
    let tuple = CompactTuple::new(vec![Part::new(set, 1)])?;
    let mut tau = 1u64;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if let ExactOutcome::Exact(c) = exact_count_or_exceeds(o, &tuple, tau)? {
            let accepted_exponent = (c > 0).then(|| 63 - c.leading_zeros());
            return Ok(CoarseResult {
                estimate: BigRational::from_integer(c.into()),
                accepted_exponent,
                trials_used: rounds,
            });
        }
        tau = tau.checked_mul(2).ok_or(Error::Overflow("doubling threshold"))?;
    }
}

/// Lower and upper factor of the coarse guarantee:
/// `m_o / lower <= E <= upper * m_o`.
pub fn bound_factors(n: usize, d: usize) -> (f64, f64) {
    let base = (d as f64).powi(d as i32 - 1) * 2f64.powi(d as i32) * (log2_ceil(n) as f64).powi(d as i32 - 1);
    (8.0 * base, 20.0 * base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::brute_ordered_count;
    use crate::generate::{generate, GeneratorSpec};
    use crate::hypergraph::Hypergraph;
    use crate::rng;
    use crate::tuple::{TupleForm, VertexSet};

    fn whole(n: usize, d: usize) -> GeneralTuple {
        CompactTuple::whole(n, d).to_general()
    }

    #[test]
    fn probabilities_follow_the_ladder() {
        let g = GuessVector { j: vec![3] };
        assert_eq!(g.probabilities(16.0, 4), vec![0.5, 0.125]);
        let g = GuessVector { j: vec![2, 3] };
        let p = g.probabilities(2.0, 4);
        assert_eq!(p, vec![1.0, 1.0, 0.125]);
        let g = GuessVector { j: vec![0, 0] };
        assert_eq!(g.probabilities(1024.0, 4)[2], 1.0);
    }

    #[test]
    fn odometer_visits_every_vector() {
        let mut j = vec![2, 2];
        let mut seen = 1;
        while decrement(&mut j, 2) {
            seen += 1;
        }
        assert_eq!(seen, 9);
        assert_eq!(j, vec![2, 2]);
    }

    #[test]
    fn subset_sampling_rate() {
        let set: Vec<Vertex> = (0..10_000).collect();
        let mut r = rng::stream(1, &[]);
        let mut out = Vec::new();
        bernoulli_subset(&set, 0.1, &mut r, &mut out);
        assert!((850..1150).contains(&out.len()), "{}", out.len());
        assert!(out.windows(2).all(|w| w[0] < w[1]));
        bernoulli_subset(&set, 1.0, &mut r, &mut out);
        assert_eq!(out.len(), 10_000);
    }

    #[test]
    fn empty_family_never_accepts() {
        let h = Hypergraph::empty(32, 2).unwrap();
        let mut o = Oracle::direct(&h);
        let mut r = rng::stream(3, &[]);
        for _ in 0..50 {
            assert!(!verify_estimate(&mut o, &whole(32, 2), 1.0, &mut r).unwrap());
        }
        let res = coarse_estimate(&mut o, &whole(32, 2), &mut r, 40).unwrap();
        assert!(res.estimate.is_zero());
        assert_eq!(res.accepted_exponent, None);
    }

    #[test]
    fn query_budget_per_sweep() {
        let h = generate(&GeneratorSpec::planted_clique(16, 2, 5, 1)).unwrap();
        let mut o = Oracle::direct(&h);
        let mut r = rng::stream(4, &[]);
        let gamma = 20;
        coarse_estimate(&mut o, &whole(16, 2), &mut r, gamma).unwrap();
        let top = 2 * 4 + 1;
        assert!(o.counts().gpis2 <= top * gamma * top);
    }

    #[test]
    fn planted_clique_lands_in_window() {
        let h = generate(&GeneratorSpec::planted_clique(64, 2, 16, 2)).unwrap();
        let t = whole(64, 2);
        let m_o = brute_ordered_count(&h, &TupleForm::General(t.clone())).unwrap() as f64;
        assert_eq!(m_o, 240.0);
        let (lo, hi) = bound_factors(64, 2);
        let mut o = Oracle::direct(&h);
        let mut r = rng::stream(5, &[]);
        let e = coarse_estimate(&mut o, &t, &mut r, practical_gamma(64)).unwrap().estimate_f64();
        assert!(m_o / lo <= e && e <= hi * m_o, "{e}");
    }

    #[test]
    fn single_vertex_edges_use_doubling() {
        let h = Hypergraph::new(20, 1, (0..13u32).map(|v| [v])).unwrap();
        let mut o = Oracle::direct(&h);
        let t = GeneralTuple::new(vec![VertexSet::range(20)]).unwrap();
        let mut r = rng::stream(6, &[]);
        let res = coarse_estimate(&mut o, &t, &mut r, 1).unwrap();
        assert_eq!(res.estimate, BigRational::from_integer(13.into()));
        assert!(verify_estimate(&mut o, &t, 1.0, &mut r).is_err());
    }

    #[test]
    fn nonpositive_guess_is_rejected() {
        let h = Hypergraph::empty(8, 2).unwrap();
        let mut o = Oracle::direct(&h);
        let mut r = rng::stream(7, &[]);
        assert!(verify_estimate(&mut o, &whole(8, 2), 0.0, &mut r).is_err());
    }
}
