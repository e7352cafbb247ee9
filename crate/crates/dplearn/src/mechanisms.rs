//! Core differential-privacy primitives.
//!
//! Three building blocks, shared by every private learner in this crate:
//!
//! * the **exponential mechanism** ([`em_select`]): samples a candidate with
//!   probability proportional to `exp(epsilon * score / 2)`, so that for a
//!   score function of sensitivity 1 the selection is `epsilon`-private, and
//!   with probability at least `1 - e^{-tau}` the selected score is within
//!   `(2/epsilon) * (ln(candidates) + tau)` of the maximum;
//! * **AboveThreshold** (the sparse-vector technique, [`AboveThreshold`]):
//!   answers a stream of sensitivity-1 threshold queries, halting at the
//!   first noisy "above" answer, with threshold noise `Lap(2/epsilon_hat)`
//!   and per-query noise `Lap(4/epsilon_hat)`;
//! * **advanced composition** ([`advanced_composition`]): the
//!   `epsilon_0 * sqrt(2 k ln(1/delta')) + k * epsilon_0^2` budget for `k`
//!   adaptively composed `epsilon_0`-private steps.
//!
//! Every mechanism takes a [`NoiseMode`]; [`NoiseMode::ZeroNoise`] replaces
//! each noise draw with 0, turning mechanisms into their deterministic limits
//! (argmax selection, exact threshold comparison). That mode exists for
//! debugging and for negative controls in privacy audits — it is, by design,
//! not private at all.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randomness::RandomSource;

/// Whether mechanisms add calibrated noise (the default) or run in their
/// deterministic zero-noise limit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseMode {
    /// Calibrated noise; the private regime.
    #[default]
    Standard,
    /// Every noise draw is replaced by 0. Selection becomes argmax with ties
    /// broken toward the lowest index; threshold tests become exact.
    ZeroNoise,
}

/// An `(epsilon, delta)` differential-privacy budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyParams {
    /// Validates `epsilon > 0` and `delta` in `[0, 1)`.
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Parameter(format!(
                "privacy: epsilon must be a positive finite real, got {epsilon}"
            )));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Parameter(format!(
                "privacy: delta must lie in [0, 1), got {delta}"
            )));
        }
        Ok(Self { epsilon, delta })
    }
}

/// Samples index `h` with probability proportional to
/// `exp(epsilon * scores[h] / 2)`.
///
/// Scores are shifted by their maximum before exponentiation, so arbitrarily
/// negative scores are handled without underflowing the total mass. In
/// [`NoiseMode::ZeroNoise`] the draw is skipped entirely and the first index
/// attaining the maximum score is returned.
pub fn em_select(
    scores: &[f64],
    epsilon: f64,
    source: &mut RandomSource,
    mode: NoiseMode,
) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::Parameter("em_select: empty candidate set".into()));
    }
    if let Some(bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::Parameter(format!(
            "em_select: scores must be finite, got {bad}"
        )));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!(
            "em_select: epsilon must be a positive finite real, got {epsilon}"
        )));
    }
    match mode {
        NoiseMode::ZeroNoise => {
            let mut best = 0;
            for (j, &s) in scores.iter().enumerate() {
                if s > scores[best] {
                    best = j;
                }
            }
            Ok(best)
        }
        NoiseMode::Standard => {
            let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = scores
                .iter()
                .map(|&s| (0.5 * epsilon * (s - max)).exp())
                .collect();
            source.categorical(&weights)
        }
    }
}

/// The utility radius of the exponential mechanism: with probability at least
/// `1 - e^{-tau}`, the selected candidate's score is within
/// `(2/epsilon) * (ln(num_candidates) + tau)` of the best score.
pub fn em_utility_bound(num_candidates: usize, epsilon: f64, tau: f64) -> Result<f64> {
    if num_candidates == 0 {
        return Err(Error::Parameter(
            "em_utility_bound: need at least one candidate".into(),
        ));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!(
            "em_utility_bound: epsilon must be a positive finite real, got {epsilon}"
        )));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Parameter(format!(
            "em_utility_bound: tau must be a positive finite real, got {tau}"
        )));
    }
    Ok((2.0 / epsilon) * ((num_candidates as f64).ln() + tau))
}

/// Total `epsilon` after `k` adaptive compositions of an `epsilon_0`-private
/// step, at composition slack `delta_prime`:
/// `epsilon_0 * sqrt(2 k ln(1/delta')) + k * epsilon_0^2`.
pub fn advanced_composition(epsilon_0: f64, k: u64, delta_prime: f64) -> Result<f64> {
    if !(epsilon_0 >= 0.0) || !epsilon_0.is_finite() {
        return Err(Error::Parameter(format!(
            "advanced_composition: epsilon_0 must be a nonnegative finite real, got {epsilon_0}"
        )));
    }
    if k == 0 {
        return Err(Error::Parameter(
            "advanced_composition: k must be at least 1".into(),
        ));
    }
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(Error::Parameter(format!(
            "advanced_composition: delta' must lie in (0, 1), got {delta_prime}"
        )));
    }
    let kf = k as f64;
    Ok(epsilon_0 * (2.0 * kf * (1.0 / delta_prime).ln()).sqrt() + kf * epsilon_0 * epsilon_0)
}

// ---------------------------------------------------------------------------
// AboveThreshold (sparse vector)
// ---------------------------------------------------------------------------

/// One instance of the AboveThreshold mechanism.
///
/// The instance is initialized with a privacy budget `epsilon_hat` and a
/// public threshold; it perturbs the threshold once with `Lap(2/epsilon_hat)`
/// and then answers sensitivity-1 queries, each perturbed with
/// `Lap(4/epsilon_hat)`, until the first `true` answer, after which it halts.
/// A halted instance rejects further queries.
///
/// Accuracy: with probability at least `1 - failure_prob`, over a horizon of
/// `T` queries all answers are correct up to the width
/// `alpha = 8 ln(2 T / failure_prob) / epsilon_hat` (see
/// [`AboveThreshold::accuracy_width`]).
#[derive(Clone, Debug)]
pub struct AboveThreshold {
    epsilon_hat: f64,
    threshold: f64,
    noisy_threshold: f64,
    failure_prob: f64,
    halted: bool,
    queries_seen: u64,
    mode: NoiseMode,
}

impl AboveThreshold {
    /// Creates an instance and draws the threshold noise.
    pub fn initialize(
        epsilon_hat: f64,
        threshold: f64,
        failure_prob: f64,
        source: &mut RandomSource,
        mode: NoiseMode,
    ) -> Result<Self> {
        if !(epsilon_hat > 0.0) || !epsilon_hat.is_finite() {
            return Err(Error::Parameter(format!(
                "above_threshold: epsilon_hat must be a positive finite real, got {epsilon_hat}"
            )));
        }
        if !threshold.is_finite() {
            return Err(Error::Parameter(format!(
                "above_threshold: threshold must be finite, got {threshold}"
            )));
        }
        if !(failure_prob > 0.0 && failure_prob < 1.0) {
            return Err(Error::Parameter(format!(
                "above_threshold: failure probability must lie in (0, 1), got {failure_prob}"
            )));
        }
        let noise = match mode {
            NoiseMode::ZeroNoise => 0.0,
            NoiseMode::Standard => source.laplace(2.0 / epsilon_hat)?,
        };
        Ok(Self {
            epsilon_hat,
            threshold,
            noisy_threshold: threshold + noise,
            failure_prob,
            halted: false,
            queries_seen: 0,
            mode,
        })
    }

    /// Tests one query value against the noisy threshold. Returns `true` iff
    /// `query_value + Lap(4/epsilon_hat) >= noisy_threshold`; a `true` answer
    /// halts the instance. Querying a halted instance is a state error.
    pub fn test(&mut self, query_value: f64, source: &mut RandomSource) -> Result<bool> {
        if self.halted {
            return Err(Error::State(
                "above_threshold: instance has already answered true".into(),
            ));
        }
        if !query_value.is_finite() {
            return Err(Error::Parameter(format!(
                "above_threshold: query value must be finite, got {query_value}"
            )));
        }
        let noise = match self.mode {
            NoiseMode::ZeroNoise => 0.0,
            NoiseMode::Standard => source.laplace(4.0 / self.epsilon_hat)?,
        };
        self.queries_seen += 1;
        let fired = query_value + noise >= self.noisy_threshold;
        if fired {
            self.halted = true;
        }
        Ok(fired)
    }

    /// Whether this instance has answered `true` and halted.
    pub fn is_halted(&self) -> bool {
        self.halted
    }

    /// Number of queries answered so far.
    pub fn queries_seen(&self) -> u64 {
        self.queries_seen
    }

    /// The public (pre-noise) threshold.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// The perturbed threshold actually compared against. Exposed for tests
    /// and diagnostics; treating it as public would break privacy.
    pub fn noisy_threshold(&self) -> f64 {
        self.noisy_threshold
    }

    /// The failure probability this instance was initialized with.
    pub fn failure_prob(&self) -> f64 {
        self.failure_prob
    }

    /// The accuracy width `alpha = 8 ln(2 horizon / failure_prob) /
    /// epsilon_hat`: over `horizon` queries, with probability at least
    /// `1 - failure_prob`, no query that is `alpha` below the threshold
    /// answers `true` and any query `alpha` above it answers `true`.
    pub fn accuracy_width(epsilon_hat: f64, horizon: u64, failure_prob: f64) -> f64 {
        8.0 * (2.0 * horizon as f64 / failure_prob).ln() / epsilon_hat
    }
}
