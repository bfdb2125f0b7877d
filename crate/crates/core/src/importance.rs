//! Importance sampling of weighted tuples.
//!
//! Entries are bucketed by `ceil(log2(w * e))`, where `w` is the weight and
//! `e` a coarse estimate of the entry's count. Inside a bucket the products
//! `w * m_o` are within a constant factor of each other (up to the quality of
//! `e`), so a uniform sample with weights scaled by `population / kept` is
//! unbiased and has small relative variance. Bucket quotas are filled
//! smallest bucket first so that the output never exceeds the target size.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::index;
use rand::Rng;

use crate::coarse::ratio_to_f64;
use crate::error::{Error, Result};

/// An item with its weight `w >= 1` and coarse estimate `e >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEstimate<T> {
    pub item: T,
    pub weight: BigRational,
    pub estimate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingParams {
    /// Relative deviation the reduction should stay within.
    pub lambda: f64,
    /// Allowed failure probability.
    pub delta: f64,
    /// Quality factor of the estimates: `e / alpha <= m_o <= alpha * e`.
    pub alpha: f64,
    /// Upper bound on the weighted total.
    pub m_bound: f64,
}

impl SamplingParams {
    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda = {} must be positive", self.lambda)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta = {} must lie in (0, 1)", self.delta)));
        }
        if !(self.alpha >= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {} must be at least 1", self.alpha)));
        }
        if !(self.m_bound >= 1.0) {
            return Err(Error::InvalidParameter(format!("M = {} must be at least 1", self.m_bound)));
        }
        Ok(())
    }

    /// `alpha^4 * log2 M / lambda^2 * (log2 log2 M + log2 1/delta)`, the
    /// sample size under which the deviation bound is guaranteed (up to a
    /// constant).
    pub fn sufficient_size(&self) -> f64 {
        let log_m = self.m_bound.log2().max(1.0);
        self.alpha.powi(4) * log_m / (self.lambda * self.lambda)
            * (log_m.log2().max(0.0) + (1.0 / self.delta).log2())
    }
}

fn level<T>(e: &WeightedEstimate<T>) -> i64 {
    (ratio_to_f64(&e.weight) * e.estimate).log2().ceil() as i64
}

/// Reduces `entries` to at most `target` entries whose weighted sum of
/// counts matches the input in expectation. Returns the input unchanged when
/// it already fits. Output keeps the input order.
pub fn importance_sample<T, R: Rng + ?Sized>(
    entries: Vec<WeightedEstimate<T>>,
    params: &SamplingParams,
    target: usize,
    rng: &mut R,
) -> Result<Vec<WeightedEstimate<T>>> {
    params.validate()?;
    if target == 0 {
        return Err(Error::InvalidParameter("target size must be at least 1".into()));
    }
    let one = BigRational::one();
    for (i, e) in entries.iter().enumerate() {
        if e.weight < one || !(e.estimate >= 1.0) || !e.estimate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "entry {i} has weight {} and estimate {}; both must be at least 1",
                e.weight, e.estimate
            )));
        }
    }
    if entries.len() <= target {
        return Ok(entries);
    }

    let mut by_level: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        by_level.entry(level(e)).or_default().push(i);
    }
    let levels: Vec<Vec<usize>> = by_level.into_values().collect();
    let groups = merge_levels(levels, target);

    // Smallest groups first; each takes an even share of what is left.
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&g| (groups[g].len(), g));
    let mut left = target;
    let mut quota = vec![0usize; groups.len()];
    for (done, &g) in order.iter().enumerate() {
        let share = (left / (groups.len() - done)).max(1);
        quota[g] = groups[g].len().min(share);
        left -= quota[g];
    }

    let mut keep: Vec<Option<BigRational>> = vec![None; entries.len()];
    for (g, members) in groups.iter().enumerate() {
        let pop = members.len();
        if quota[g] == pop {
            members.iter().for_each(|&i| keep[i] = Some(one.clone()));
            continue;
        }
        let scale = BigRational::new(BigInt::from(pop), BigInt::from(quota[g]));
        for pick in index::sample(rng, pop, quota[g]) {
            keep[members[pick]] = Some(scale.clone());
        }
    }

    Ok(entries
        .into_iter()
        .zip(keep)
        .filter_map(|(mut e, scale)| {
            let scale = scale?;
            if !scale.is_one() {
                e.weight *= scale;
            }
            Some(e)
        })
        .collect())
}

/// Joins neighbouring levels so that at most `max_groups` groups remain.
fn merge_levels(levels: Vec<Vec<usize>>, max_groups: usize) -> Vec<Vec<usize>> {
    if levels.len() <= max_groups {
        return levels;
    }
    let per = levels.len().div_ceil(max_groups);
    levels.chunks(per).map(|c| c.concat()).collect()
}
