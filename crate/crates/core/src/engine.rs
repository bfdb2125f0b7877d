//! The main estimation loop.
//!
//! The state holds an exact accumulator `psi` and a list of weighted compact
//! tuples, starting from `(U^[d], 1)`. Every iteration first counts each
//! tuple exactly if its ordered count is at most `tau`, moving `w * m_o`
//! into `psi`. The remaining tuples are then either sparsified (at most
//! `N` of them) or coarsely estimated and importance-sampled down to `N`.
//! When no tuple is left, `psi / d!` is the estimate.
//!
//! All randomness is drawn from streams keyed by (phase, iteration, tuple
//! index), so results do not depend on processing order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coarse::{coarse_estimate, ratio_to_f64};
use crate::count::{brute_ordered_count, factorial};
use crate::error::{Error, Result};
use crate::exact::{exact_count_or_exceeds, ExactOutcome};
use crate::hypergraph::Hypergraph;
use crate::importance::{importance_sample, SamplingParams, WeightedEstimate};
use crate::oracle::{Oracle, QueryCounts};
use crate::profile::ConstantsProfile;
use crate::rng::{self, label};
use crate::sparsify::{sparsify_with, Coloring, HdHash};
use crate::tuple::{CompactTuple, PartiteTuple, TupleForm};
use crate::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Exact,
    Sparsify,
    Coarse,
    Brute,
}

/// Accumulator plus the weighted tuples still to be counted.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorState {
    /// Resolved ordered hyperedges, weighted.
    pub psi: BigRational,
    /// Unresolved tuples, always in compact form.
    pub tuples: Vec<PartiteTuple>,
    /// Completed iterations.
    pub iteration: usize,
}

impl EstimatorState {
    /// `psi = 0` and the single tuple `(U^[d], 1)`.
    pub fn initial(n: usize, d: usize) -> Self {
        Self {
            psi: BigRational::zero(),
            tuples: vec![PartiteTuple::compact(CompactTuple::whole(n, d))],
            iteration: 0,
        }
    }
}

/// What one phase did.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub iteration: usize,
    pub phase: Phase,
    pub tuples_before: usize,
    pub tuples_after: usize,
    pub psi: f64,
    pub queries: QueryCounts,
    /// Tuples whose coarse estimate stayed 0 after one retry.
    pub coarse_failures: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    /// `psi / d!`.
    pub estimate: BigRational,
    pub psi: BigRational,
    pub iterations: usize,
    pub trace: Vec<PhaseRecord>,
    /// Statistical failures, reported rather than raised.
    pub failures: Vec<String>,
}

impl RunOutcome {
    pub fn estimate_f64(&self) -> f64 {
        ratio_to_f64(&self.estimate)
    }
}

fn compact_of(t: &PartiteTuple) -> CompactTuple {
    match &t.form {
        TupleForm::Compact(c) => c.clone(),
        TupleForm::General(g) => g.to_compact().expect("engine tuples fold to compact form"),
    }
}

/// Estimates `m(H)` for the hypergraph behind `o`.
pub fn estimate_hyperedges(o: &mut Oracle<'_>, profile: &ConstantsProfile) -> Result<RunOutcome> {
    estimate_with_observer(o, profile, |_, _| {})
}

/// Like [`estimate_hyperedges`], calling `observe` after every phase with
/// the state it left behind.
pub fn estimate_with_observer(
    o: &mut Oracle<'_>,
    profile: &ConstantsProfile,
    mut observe: impl FnMut(&EstimatorState, &PhaseRecord),
) -> Result<RunOutcome> {
    let (n, d) = (o.n(), o.d());
    if profile.n != n || profile.d != d {
        return Err(Error::InvalidParameter(format!(
            "profile built for n = {}, d = {} but the oracle has n = {n}, d = {d}",
            profile.n, profile.d
        )));
    }
    if !(profile.eps > 0.0 && profile.eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {} must lie in (0, 1)", profile.eps)));
    }
    let d_fact = BigInt::from(factorial(d as u64).ok_or(Error::Overflow("d!"))?);
    let mut trace = Vec::new();
    let mut failures = Vec::new();

    if profile.brute_branch() {
        let before = o.counts();
        let ordered = brute_force_ordered(o)?;
        let psi = BigRational::from_integer(ordered.into());
        let record = PhaseRecord {
            iteration: 0,
            phase: Phase::Brute,
            tuples_before: 1,
            tuples_after: 0,
            psi: ratio_to_f64(&psi),
            queries: o.counts() - before,
            coarse_failures: 0,
        };
        let state = EstimatorState { psi: psi.clone(), tuples: Vec::new(), iteration: 0 };
        observe(&state, &record);
        trace.push(record);
        let estimate = &psi / BigRational::from_integer(d_fact);
        return Ok(RunOutcome { estimate, psi, iterations: 0, trace, failures });
    }

    let mut state = EstimatorState::initial(n, d);
    while !state.tuples.is_empty() {
        if state.iteration >= profile.max_iterations {
            failures.push(format!(
                "stopped after {} iterations with {} tuples left",
                state.iteration,
                state.tuples.len()
            ));
            break;
        }
        let record = run_exact_phase(&mut state, o, profile)?;
        observe(&state, &record);
        trace.push(record);
        if !state.tuples.is_empty() {
            let record = if state.tuples.len() as u64 <= profile.n_max {
                run_sparsify_phase(&mut state, profile)?
            } else {
                let record = run_coarse_phase(&mut state, o, profile)?;
                if record.coarse_failures > 0 {
                    failures.push(format!(
                        "iteration {}: {} coarse estimates stayed 0 after a retry",
                        state.iteration, record.coarse_failures
                    ));
                }
                record
            };
            observe(&state, &record);
            trace.push(record);
        }
        state.iteration += 1;
    }
    let estimate = &state.psi / BigRational::from_integer(d_fact);
    Ok(RunOutcome { estimate, psi: state.psi, iterations: state.iteration, trace, failures })
}

/// One GPIS query per ordered tuple of distinct singletons.
fn brute_force_ordered(o: &mut Oracle<'_>) -> Result<u64> {
    let (n, d) = (o.n() as Vertex, o.d());
    let mut tuple: Vec<Vertex> = vec![0; d];
    let mut count = 0;
    // Odometer over [n]^d, skipping tuples with repeated vertices.
    loop {
        let distinct = (0..d).all(|i| (0..i).all(|j| tuple[i] != tuple[j]));
        if distinct {
            let sets: Vec<&[Vertex]> = tuple.iter().map(std::slice::from_ref).collect();
            if o.gpis(&sets)? {
                count += 1;
            }
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Counts every tuple with `m_o <= tau` exactly, adds `w * m_o` to `psi`
/// and drops it; the others stay.
pub fn run_exact_phase(
    state: &mut EstimatorState,
    o: &mut Oracle<'_>,
    profile: &ConstantsProfile,
) -> Result<PhaseRecord> {
    let before = o.counts();
    let tuples_before = state.tuples.len();
    let mut kept = Vec::with_capacity(tuples_before);
    for (i, t) in std::mem::take(&mut state.tuples).into_iter().enumerate() {
        let mut sub = o.fork(&[label::EXACT, state.iteration as u64, i as u64]);
        let outcome = exact_count_or_exceeds(&mut sub, &compact_of(&t), profile.tau)?;
        o.absorb(sub.counts());
        match outcome {
            ExactOutcome::Exact(c) => {
                if c > 0 {
                    state.psi += &t.weight * BigRational::from_integer(c.into());
                }
            }
            ExactOutcome::ExceedsThreshold => kept.push(t),
        }
    }
    state.tuples = kept;
    Ok(PhaseRecord {
        iteration: state.iteration,
        phase: Phase::Exact,
        tuples_before,
        tuples_after: state.tuples.len(),
        psi: ratio_to_f64(&state.psi),
        queries: o.counts() - before,
        coarse_failures: 0,
    })
}

/// Replaces every tuple by its colour-class children of weight `k * w`.
/// Asks no queries.
pub fn run_sparsify_phase(
    state: &mut EstimatorState,
    profile: &ConstantsProfile,
) -> Result<PhaseRecord> {
    let tuples_before = state.tuples.len();
    let iter = state.iteration as u64;
    let mut next = Vec::new();
    for (i, t) in std::mem::take(&mut state.tuples).into_iter().enumerate() {
        let compact = compact_of(&t);
        let hash_seed = rng::derive_seed(profile.seed, &[label::SPARSIFY_HASH, iter, i as u64]);
        let color_seed = rng::derive_seed(profile.seed, &[label::SPARSIFY_COLOR, iter, i as u64]);
        let hash = HdHash::new(profile.k, compact.d(), hash_seed)?;
        let coloring = Coloring::new(profile.k, color_seed)?;
        for (child, weight) in sparsify_with(&compact, &t.weight, &hash, &coloring) {
            let folded = child.to_compact().expect("colour classes are equal or disjoint");
            next.push(PartiteTuple { form: TupleForm::Compact(folded), weight });
        }
    }
    state.tuples = next;
    Ok(PhaseRecord {
        iteration: state.iteration,
        phase: Phase::Sparsify,
        tuples_before,
        tuples_after: state.tuples.len(),
        psi: ratio_to_f64(&state.psi),
        queries: QueryCounts::default(),
        coarse_failures: 0,
    })
}

/// Coarse-estimates every tuple and importance-samples the list down to
/// `N` tuples.
///
/// An estimate of 0 means the sweep found nothing although the tuple was
/// certified to hold more than `tau` ordered hyperedges; it is retried once
/// with a fresh stream, and if it stays 0 the tuple proceeds with estimate 1
/// and the failure is counted.
pub fn run_coarse_phase(
    state: &mut EstimatorState,
    o: &mut Oracle<'_>,
    profile: &ConstantsProfile,
) -> Result<PhaseRecord> {
    let before = o.counts();
    let tuples_before = state.tuples.len();
    let iter = state.iteration as u64;
    let mut failures = 0;
    let mut entries = Vec::with_capacity(tuples_before);
    for (i, t) in std::mem::take(&mut state.tuples).into_iter().enumerate() {
        let general = t.form.to_general();
        let mut estimate = 0.0;
        for attempt in 0..2u64 {
            let labels = [label::COARSE, iter, i as u64, attempt];
            let mut sub = o.fork(&labels);
            let mut r = rng::stream(profile.seed, &labels);
            let res = coarse_estimate(&mut sub, &general, &mut r, profile.gamma)?;
            o.absorb(sub.counts());
            estimate = res.estimate_f64();
            if estimate > 0.0 {
                break;
            }
        }
        if estimate <= 0.0 {
            failures += 1;
        }
        entries.push(WeightedEstimate { item: t.form, weight: t.weight, estimate: estimate.max(1.0) });
    }
    let max_weight = entries.iter().map(|e| ratio_to_f64(&e.weight)).fold(1.0, f64::max);
    let params = SamplingParams {
        lambda: profile.lambda,
        delta: profile.delta,
        alpha: profile.alpha,
        m_bound: (profile.n as f64).powi(profile.d as i32) * max_weight,
    };
    let mut r = rng::stream(profile.seed, &[label::IMPORTANCE, iter]);
    let target = usize::try_from(profile.n_max).unwrap_or(usize::MAX);
    let sampled = importance_sample(entries, &params, target, &mut r)?;
    state.tuples = sampled
        .into_iter()
        .map(|e| PartiteTuple { form: e.item, weight: e.weight })
        .collect();
    Ok(PhaseRecord {
        iteration: state.iteration,
        phase: Phase::Coarse,
        tuples_before,
        tuples_after: state.tuples.len(),
        psi: ratio_to_f64(&state.psi),
        queries: o.counts() - before,
        coarse_failures: failures,
    })
}

/// `(EST, ACT)`: `psi + sum w * m_o` and `sum m_o` over the current tuples,
/// by brute force. For tests and audits only.
pub fn audit_state(state: &EstimatorState, h: &Hypergraph) -> Result<(BigRational, u64)> {
    let mut est = state.psi.clone();
    let mut act = 0u64;
    for t in &state.tuples {
        let m_o = brute_ordered_count(h, &t.form)?;
        act += m_o;
        est += &t.weight * BigRational::from_integer(m_o.into());
    }
    Ok((est, act))
}

/// `w * m_o` summed over `tuples`, by brute force.
pub fn weighted_total(tuples: &[PartiteTuple], h: &Hypergraph) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for t in tuples {
        let m_o = brute_ordered_count(h, &t.form)?;
        total += &t.weight * BigRational::from_integer(m_o.into());
    }
    Ok(total)
}

impl Default for EstimatorState {
    fn default() -> Self {
        Self { psi: BigRational::zero(), tuples: Vec::new(), iteration: 0 }
    }
}
