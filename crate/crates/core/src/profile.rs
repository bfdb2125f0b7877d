//! Tunable constants of the estimator.
//!
//! `Theoretical` evaluates the constants exactly as the analysis states
//! them. They exceed `n^d` for every size that fits on a desk, so that
//! profile almost always ends in the brute-force branch; it is mostly useful
//! for printing. `Practical` keeps every step and every asymptotic shape but
//! with small leading constants.

use serde::{Deserialize, Serialize};

use crate::coarse::{practical_gamma, theoretical_gamma};
use crate::error::{Error, Result};
use crate::exact::log2_ceil;
use crate::oracle::default_gpis1_reps;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    Theoretical,
    #[default]
    Practical,
}

impl ProfileMode {
    pub fn name(self) -> &'static str {
        match self {
            ProfileMode::Theoretical => "theoretical",
            ProfileMode::Practical => "practical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsProfile {
    pub mode: ProfileMode,
    pub n: usize,
    pub d: usize,
    pub eps: f64,
    /// Number of colours used by sparsification.
    pub k: u64,
    pub theta: u64,
    /// Exact-counting threshold.
    pub tau: u64,
    /// Tuple count above which the coarse phase replaces sparsification.
    pub n_max: u64,
    /// Verification trials per coarse guess.
    pub gamma: u64,
    pub lambda: f64,
    pub alpha: f64,
    pub delta: f64,
    pub kappa_d: f64,
    pub gpis1_reps: u64,
    pub seed: u64,
    /// At or below this `eps` every ordered singleton tuple is queried.
    pub small_eps_threshold: f64,
    /// Hard stop for the main loop.
    pub max_iterations: usize,
}

fn ceil_u64(x: f64) -> u64 {
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.ceil() as u64
    }
}

impl ConstantsProfile {
    pub fn new(mode: ProfileMode, n: usize, d: usize, eps: f64, seed: u64) -> Result<Self> {
        match mode {
            ProfileMode::Theoretical => Self::theoretical(n, d, eps, seed),
            ProfileMode::Practical => Self::practical(n, d, eps, seed),
        }
    }

    pub fn theoretical(n: usize, d: usize, eps: f64, seed: u64) -> Result<Self> {
        let mut p = Self::base(ProfileMode::Theoretical, n, d, eps, seed)?;
        let (l, df, k, theta) = (log2_ceil(n) as f64, d as f64, p.k as f64, p.theta as f64);
        let d_fact: f64 = (1..=d).map(|i| i as f64).product();
        p.tau = ceil_u64(
            k * k * 4f64.powf(2.0 * df) * theta.powf(2.0 * df) * 16.0 * df * df * d_fact
                * l.powf(df + 2.0)
                / (eps * eps),
        );
        p.n_max = ceil_u64(p.kappa_d * l.powf(4.0 * df) / (eps * eps));
        p.gamma = theoretical_gamma(n, d);
        p.delta = (n.max(2) as f64).powf(-6.0 * df).max(f64::MIN_POSITIVE);
        // (n^-d * L^(5d+5))^(1/4), through logarithms to avoid overflow.
        let log_thr = (-df * (n.max(1) as f64).ln() + (5.0 * df + 5.0) * l.ln()) / 4.0;
        p.small_eps_threshold = log_thr.exp();
        Ok(p)
    }

    pub fn practical(n: usize, d: usize, eps: f64, seed: u64) -> Result<Self> {
        let mut p = Self::base(ProfileMode::Practical, n, d, eps, seed)?;
        let l = log2_ceil(n) as f64;
        p.tau = ceil_u64(16.0 * l * l / (eps * eps));
        p.n_max = ceil_u64(8.0 * l * l / (eps * eps));
        p.gamma = practical_gamma(n);
        p.delta = 1e-3;
        // Brute force exactly when n^d ordered singleton queries fit in tau.
        let log_nd = d as f64 * (n.max(1) as f64).ln();
        p.small_eps_threshold = (0.5 * ((16.0 * l * l).ln() - log_nd)).exp();
        Ok(p)
    }

    fn base(mode: ProfileMode, n: usize, d: usize, eps: f64, seed: u64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1)")));
        }
        if d == 0 || n == 0 {
            return Err(Error::InvalidParameter("n and d must be at least 1".into()));
        }
        let l = log2_ceil(n) as f64;
        let df = d as f64;
        Ok(Self {
            mode,
            n,
            d,
            eps,
            k: 4,
            theta: 2 * d as u64,
            tau: 1,
            n_max: 1,
            gamma: 1,
            lambda: eps / (4.0 * df * l),
            alpha: 20.0 * 2f64.powf(df) * df.powf(df - 1.0) * l.powf(df - 1.0),
            delta: 1e-3,
            kappa_d: 1.0,
            gpis1_reps: default_gpis1_reps(n, d),
            seed,
            small_eps_threshold: 0.0,
            max_iterations: 8 * d * log2_ceil(n) as usize + 32,
        })
    }

    /// Whether the estimator should skip the loop and enumerate.
    pub fn brute_branch(&self) -> bool {
        self.eps <= self.small_eps_threshold
    }

    /// Tuple count the analysis never exceeds: `k^d * N`.
    pub fn tuple_ceiling(&self) -> u128 {
        (self.k as u128).saturating_pow(self.d as u32).saturating_mul(self.n_max as u128)
    }

    /// `2d * L + 2`.
    pub fn iteration_bound(&self) -> usize {
        2 * self.d * log2_ceil(self.n) as usize + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn practical_constants() {
        let p = ConstantsProfile::practical(1024, 2, 0.1, 0).unwrap();
        assert_eq!(p.tau, 160_000);
        assert_eq!(p.n_max, 80_000);
        assert_eq!(p.gamma, 400);
        assert_eq!(p.gpis1_reps, 48);
        assert!((p.lambda - 0.1 / 80.0).abs() < 1e-15);
        assert_eq!(p.alpha, 20.0 * 4.0 * 2.0 * 10.0);
        assert!(!p.brute_branch());
    }

    #[test]
    fn theoretical_constants_at_sixteen() {
        let p = ConstantsProfile::theoretical(16, 2, 0.5, 0).unwrap();
        // 16 * 256 * 4^4 * 16 * 4 * 2 * 4^4 / 0.25
        assert_eq!(p.tau, 16 * 256 * 256 * 16 * 4 * 2 * 256 * 4);
        assert_eq!(p.n_max, 65_536 * 4);
        assert_eq!(p.gamma, 2 * 16 * 2000 * 4);
        assert!((p.delta - 16f64.powi(-12)).abs() < 1e-25);
        assert!(p.brute_branch());
    }

    #[test]
    fn small_eps_switches_to_enumeration() {
        let p = ConstantsProfile::practical(6, 3, 0.01, 0).unwrap();
        assert!(p.brute_branch());
        let p = ConstantsProfile::practical(6, 3, 0.9, 0).unwrap();
        // 216 ordered tuples versus tau = ceil(16 * 9 / 0.81) = 178.
        assert!(!p.brute_branch());
    }

    #[test]
    fn eps_must_be_a_fraction() {
        assert!(ConstantsProfile::practical(16, 2, 0.0, 0).is_err());
        assert!(ConstantsProfile::practical(16, 2, 1.0, 0).is_err());
        assert!(ConstantsProfile::theoretical(16, 2, -0.1, 0).is_err());
    }
}
