//! Confident Winnow: multiplicative weights over the probability simplex for
//! online halfspace prediction with a margin.
//!
//! The state is a weight vector `w` on the `d`-simplex (kept in log space for
//! numerical stability). On example `x in {-1,+1}^d` the prediction is
//! `sgn(<w, x>)` with `sgn(0) = +1`. After the true label `y` and an
//! adversarially chosen update bit `b` are revealed, the learner updates —
//! `w_i <- w_i * exp(eta * y * x_i)`, renormalized — exactly when the
//! prediction was wrong, or when it was unconfident (`|<w, x>| < c * rho`)
//! and `b = 1`.
//!
//! If some nonnegative unit-`l1` target `v` satisfies `y * <v, x> >= rho` on
//! every round, each update decreases the relative entropy
//! `phi(v, w) = sum_i v_i * ln(v_i / w_i)` by at least
//! `(1 - c) * eta * rho - eta^2 / 2`, so for confidence `c < 1/2` the number
//! of updates — regardless of the bits `b` — is at most
//! `ln d / ((1 - c) * eta * rho - eta^2 / 2)` ([`ConfidentWinnowParams::update_bound`]).

use crate::error::{Error, Result};
use crate::transcript::{RoundRecord, RunTranscript};

/// Sign with the convention `sgn(0) = +1`.
pub fn sgn(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// One online example: coordinates and label in `{-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnlineExample {
    pub x: Vec<i8>,
    pub y: i8,
}

impl OnlineExample {
    pub fn new(x: Vec<i8>, y: i8) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Parameter("online example: empty coordinate vector".into()));
        }
        if let Some(bad) = x.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::Parameter(format!(
                "online example: coordinates must be +1 or -1, got {bad}"
            )));
        }
        if y != 1 && y != -1 {
            return Err(Error::Parameter(format!(
                "online example: label must be +1 or -1, got {y}"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

// ---------------------------------------------------------------------------
// Weight vectors
// ---------------------------------------------------------------------------

/// A probability vector kept in log space; multiplicative updates and
/// renormalization never leave the simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    log_w: Vec<f64>,
}

impl WeightVector {
    /// The uniform vector `(1/d, ..., 1/d)`.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("weight vector: dimension must be positive".into()));
        }
        Ok(Self { log_w: vec![-(dim as f64).ln(); dim] })
    }

    /// Builds from nonnegative weights (normalized internally; zeros allowed).
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Parameter("weight vector: dimension must be positive".into()));
        }
        let mut sum = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Parameter(format!(
                    "weight vector: entry {i} must be a nonnegative finite real, got {p}"
                )));
            }
            sum += p;
        }
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::Parameter(format!(
                "weight vector: entries must sum to a positive finite real, got {sum}"
            )));
        }
        Ok(Self { log_w: probs.iter().map(|&p| (p / sum).ln()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.log_w.len()
    }

    /// The probabilities, summing to 1 up to rounding.
    pub fn probs(&self) -> Vec<f64> {
        self.log_w.iter().map(|&l| l.exp()).collect()
    }

    /// Log-probabilities (entries of weight zero are `-inf`).
    pub fn log_probs(&self) -> &[f64] {
        &self.log_w
    }

    /// `<w, x>` for `x in {-1, +1}^d`.
    pub fn inner(&self, x: &[i8]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self
            .log_w
            .iter()
            .zip(x)
            .map(|(&l, &xi)| l.exp() * f64::from(xi))
            .sum())
    }

    /// Multiplicative-weights step: `w_i <- w_i * exp(eta * y * x_i)`,
    /// renormalized to the simplex.
    pub fn mw_update(&mut self, x: &[i8], y: i8, eta: f64) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if y != 1 && y != -1 {
            return Err(Error::Parameter(format!("mw_update: label must be +1 or -1, got {y}")));
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::Parameter(format!(
                "mw_update: eta must be a nonnegative finite real, got {eta}"
            )));
        }
        for (l, &xi) in self.log_w.iter_mut().zip(x) {
            *l += eta * f64::from(y) * f64::from(xi);
        }
        let z = log_sum_exp(&self.log_w);
        for l in &mut self.log_w {
            *l -= z;
        }
        Ok(())
    }
}

fn log_sum_exp(ls: &[f64]) -> f64 {
    let max = ls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + ls.iter().map(|&l| (l - max).exp()).sum::<f64>().ln()
}

/// Relative entropy `sum_i v_i * ln(v_i / w_i)` between a target probability
/// vector `v` and the weights `w`; `0 * ln 0 = 0`, and mass of `v` on a zero
/// weight of `w` gives `+inf`. Always nonnegative.
pub fn potential(v: &[f64], w: &WeightVector) -> Result<f64> {
    if v.len() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: v.len() });
    }
    let mut sum = 0.0;
    for (i, &vi) in v.iter().enumerate() {
        if !vi.is_finite() || vi < 0.0 {
            return Err(Error::Parameter(format!(
                "potential: target entry {i} must be a nonnegative finite real, got {vi}"
            )));
        }
        sum += vi;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "potential: target must be a probability vector, entries sum to {sum}"
        )));
    }
    let mut phi = 0.0;
    for (&vi, &lw) in v.iter().zip(w.log_probs()) {
        if vi > 0.0 {
            phi += vi * (vi.ln() - lw);
        }
    }
    // Relative entropy is nonnegative; rounding may produce a tiny negative.
    debug_assert!(phi > -1e-9, "potential {phi} below zero beyond rounding");
    Ok(phi.max(0.0))
}

// ---------------------------------------------------------------------------
// Confident Winnow
// ---------------------------------------------------------------------------

/// Learning rate, confidence ratio, and margin for Confident Winnow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfidentWinnowParams {
    pub eta: f64,
    pub confidence: f64,
    pub rho: f64,
}

impl ConfidentWinnowParams {
    /// Validates `rho in (0, 1]`, `confidence in [0, 1/2)`, and
    /// `eta in (0, 2 * (1 - confidence) * rho)` (which keeps the update
    /// bound finite and positive).
    pub fn new(eta: f64, confidence: f64, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Parameter(format!(
                "confident winnow: rho must lie in (0, 1], got {rho}"
            )));
        }
        if !(0.0..0.5).contains(&confidence) {
            return Err(Error::Parameter(format!(
                "confident winnow: confidence must lie in [0, 1/2), got {confidence}"
            )));
        }
        let limit = 2.0 * (1.0 - confidence) * rho;
        if !(eta > 0.0 && eta < limit) || !eta.is_finite() {
            return Err(Error::Parameter(format!(
                "confident winnow: eta must lie in (0, {limit}), got {eta}"
            )));
        }
        Ok(Self { eta, confidence, rho })
    }

    /// Per-update potential drop `(1 - c) * eta * rho - eta^2 / 2`.
    pub fn potential_drop(&self) -> f64 {
        (1.0 - self.confidence) * self.eta * self.rho - self.eta * self.eta / 2.0
    }

    /// Maximum number of updates on any margin-`rho` realizable stream:
    /// `ln d / ((1 - c) * eta * rho - eta^2 / 2)`.
    pub fn update_bound(&self, dim: usize) -> Result<f64> {
        if dim == 0 {
            return Err(Error::Parameter("update_bound: dimension must be positive".into()));
        }
        Ok((dim as f64).ln() / self.potential_drop())
    }
}

/// The online learner state.
#[derive(Clone, Debug)]
pub struct ConfidentWinnow {
    params: ConfidentWinnowParams,
    weights: WeightVector,
    updates: u64,
}

impl ConfidentWinnow {
    /// Starts from the uniform weight vector.
    pub fn new(dim: usize, params: ConfidentWinnowParams) -> Result<Self> {
        Ok(Self { params, weights: WeightVector::uniform(dim)?, updates: 0 })
    }

    pub fn params(&self) -> &ConfidentWinnowParams {
        &self.params
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Prediction on `x` without advancing the state.
    pub fn predict(&self, x: &[i8]) -> Result<i8> {
        Ok(sgn(self.weights.inner(x)?))
    }

    /// One round: predict on `x`, observe label `y` and update bit `b`,
    /// update if the prediction was wrong or (unconfident and `b` set).
    /// Returns the prediction and whether an update happened.
    pub fn step(&mut self, x: &[i8], y: i8, b: bool) -> Result<(i8, bool)> {
        if y != 1 && y != -1 {
            return Err(Error::Parameter(format!(
                "confident winnow: label must be +1 or -1, got {y}"
            )));
        }
        let ip = self.weights.inner(x)?;
        let prediction = sgn(ip);
        let unconfident = ip.abs() < self.params.confidence * self.params.rho;
        let update = prediction != y || (unconfident && b);
        if update {
            self.weights.mw_update(x, y, self.params.eta)?;
            self.updates += 1;
        }
        Ok((prediction, update))
    }
}

/// Runs Confident Winnow over a stream of `(example, update bit)` pairs,
/// producing a per-round transcript.
pub fn run_confident_winnow(
    stream: &[(OnlineExample, bool)],
    dim: usize,
    params: ConfidentWinnowParams,
) -> Result<RunTranscript> {
    let mut learner = ConfidentWinnow::new(dim, params)?;
    let mut transcript = RunTranscript::default();
    for (t, (ex, b)) in stream.iter().enumerate() {
        let (prediction, update) = learner.step(&ex.x, ex.y, *b)?;
        transcript.push(RoundRecord {
            round: t as u64 + 1,
            prediction,
            label: ex.y,
            mistake: prediction != ex.y,
            update,
            updates_so_far: learner.updates(),
            epoch: 0,
        });
    }
    Ok(transcript)
}
