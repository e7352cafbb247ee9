//! Differentially private online halfspace learning (private Winnow).
//!
//! The learner maintains a *shadow* weight vector `w` (never revealed) and a
//! *public* vector `w_tilde` obtained by drawing `m` i.i.d. coordinates from
//! `w` and releasing their empirical distribution ([`ApproxWeights`]). Each
//! round predicts `sgn(<w_tilde, x>)`. Mistaken examples are cached; the
//! cumulative mistake count of the current epoch (including the current
//! round) is fed to an above-threshold instance with budget `epsilon_hat`
//! and threshold `L`. When the instance fires and fewer than `K` switches
//! have occurred, the shadow takes one multiplicative-weights step on the
//! *first* cached example, a fresh public vector is sampled, the cache and
//! epoch reset, and a fresh above-threshold instance starts. A fire at the
//! switching budget `K` freezes the learner: the halted instance is not
//! replaced and the public vector no longer changes.
//!
//! Parameters are tied together by [`DpWinnowParams::solve`]:
//!
//! * `m = ceil(2 ln(2T/beta) / (c^2 rho^2))`
//! * `K = ceil(ln d / ((1-c) eta rho - eta^2/2))`
//! * `eta = epsilon / (8 sqrt(2 m K ln(4K/delta)))`
//! * `epsilon_hat = epsilon / (4 sqrt(2 K ln(2/delta)))`
//! * `L = 8 ln(2T/beta) / epsilon_hat`
//!
//! `K` and `eta` are mutually dependent; the solver iterates the pair to an
//! exact fixed point and requires `eta < rho/2` at the end. A run satisfies
//! `(epsilon, delta)`-differential privacy with respect to changing one
//! example of the stream, and with probability at least `1 - 2 beta` makes at
//! most `K * 16 ln(2T^2/beta) / epsilon_hat` mistakes on any margin-`rho`
//! realizable stream ([`DpWinnowParams::mistake_bound`]).
//!
//! Everything public about a run — the sampled vectors and the rounds at
//! which they switched — is collected in a [`PublicHistory`];
//! [`recompute_from_history`] replays that history against a stream prefix
//! and reconstructs the shadow vector exactly, which is how the tests pin
//! down that the private state is a deterministic function of the public
//! view and the data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::{AboveThreshold, NoiseMode};
use crate::randomness::RandomSource;
use crate::transcript::{RoundRecord, RunTranscript};
use crate::winnow::{sgn, OnlineExample, WeightVector};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Full parameter set of a private Winnow run: the problem description
/// (horizon `T`, dimension `d`, margin `rho`, privacy `epsilon`/`delta`,
/// failure probability `beta`, confidence ratio `c`) plus the five derived
/// constants (switching bound `K`, per-instance budget `epsilon_hat`,
/// learning rate `eta`, threshold `L`, sample count `m`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DpWinnowParams {
    pub horizon: u64,
    pub dim: usize,
    pub rho: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
    pub confidence: f64,
    /// `K`: maximum number of public weight switches.
    pub switching_bound: u64,
    /// Per above-threshold-instance privacy budget.
    pub epsilon_hat: f64,
    /// Multiplicative-weights learning rate.
    pub eta: f64,
    /// `L`: the above-threshold mistake threshold.
    pub threshold: f64,
    /// `m`: number of categorical draws per public weight release.
    pub sample_count: u64,
}

/// Cap on the derived integer constants; beyond this the parameters are
/// declared infeasible rather than silently overflowing.
const DERIVED_CAP: f64 = 1e18;

impl DpWinnowParams {
    /// Derives all constants from the problem description. `K` and `eta`
    /// determine each other, so the solver iterates
    /// `K <- ceil(ln d / ((1-c) eta rho - eta^2/2))`,
    /// `eta <- epsilon / (8 sqrt(2 m K ln(4K/delta)))`
    /// from `eta = rho/4` until the pair stops changing (the map is monotone
    /// and `K` is integer, so it reaches an exact fixed point), then fills in
    /// `epsilon_hat` and `L`. Fails if the iteration does not settle within
    /// 200 steps or if the solution violates `eta < rho/2`.
    pub fn solve(
        horizon: u64,
        dim: usize,
        rho: f64,
        epsilon: f64,
        delta: f64,
        beta: f64,
        confidence: f64,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Parameter("solve_params: horizon must be positive".into()));
        }
        if dim < 2 {
            return Err(Error::Parameter(format!(
                "solve_params: dimension must be at least 2, got {dim}"
            )));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Parameter(format!(
                "solve_params: rho must lie in (0, 1], got {rho}"
            )));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Parameter(format!(
                "solve_params: epsilon must be a positive finite real, got {epsilon}"
            )));
        }
        for (name, v) in [("delta", delta), ("beta", beta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Parameter(format!(
                    "solve_params: {name} must lie in (0, 1), got {v}"
                )));
            }
        }
        if !(confidence > 0.0 && confidence < 0.5) {
            return Err(Error::Parameter(format!(
                "solve_params: confidence must lie in (0, 1/2), got {confidence}"
            )));
        }

        let t = horizon as f64;
        let d = dim as f64;
        let c = confidence;
        let log_t = (2.0 * t / beta).ln();
        let m = (2.0 * log_t / (c * c * rho * rho)).ceil();
        if !(m >= 1.0) || m > DERIVED_CAP {
            return Err(Error::Infeasible(format!(
                "solve_params: sample count m = {m} out of range (T={horizon}, rho={rho}, c={c})"
            )));
        }

        let eta_of = |k: f64| epsilon / (8.0 * (2.0 * m * k * (4.0 * k / delta).ln()).sqrt());
        let drop_of = |eta: f64| (1.0 - c) * eta * rho - eta * eta / 2.0;

        let mut eta = rho / 4.0;
        let mut k = 0.0f64;
        let mut settled = false;
        for _ in 0..200 {
            let drop = drop_of(eta);
            if !(drop > 0.0) {
                return Err(Error::Infeasible(format!(
                    "solve_params: learning rate {eta} escaped the valid range (0, 2(1-c)rho) \
                     during iteration; epsilon={epsilon} is too large for rho={rho}, c={c}"
                )));
            }
            let k_new = (d.ln() / drop).ceil().max(1.0);
            if k_new > DERIVED_CAP {
                return Err(Error::Infeasible(format!(
                    "solve_params: switching bound K = {k_new} out of range"
                )));
            }
            let eta_new = eta_of(k_new);
            if k_new == k && eta_new == eta {
                settled = true;
                break;
            }
            k = k_new;
            eta = eta_new;
        }
        if !settled {
            return Err(Error::SolverDiverged(format!(
                "solve_params: K/eta fixed point did not settle within 200 iterations \
                 (last K={k}, eta={eta})"
            )));
        }
        if !(eta < rho / 2.0) {
            return Err(Error::Infeasible(format!(
                "solve_params: solved eta = {eta} violates eta < rho/2 = {} \
                 (epsilon={epsilon}, delta={delta}, T={horizon}, d={dim})",
                rho / 2.0
            )));
        }
        let epsilon_hat = epsilon / (4.0 * (2.0 * k * (2.0 / delta).ln()).sqrt());
        let threshold = 8.0 * log_t / epsilon_hat;
        let params = Self {
            horizon,
            dim,
            rho,
            epsilon,
            delta,
            beta,
            confidence,
            switching_bound: k as u64,
            epsilon_hat,
            eta,
            threshold,
            sample_count: m as u64,
        };
        params.validate_core()?;
        Ok(params)
    }

    /// Builds a parameter set with explicitly chosen derived constants,
    /// checking only the structural ranges (not the defining equations).
    /// Intended for small hand-tuned runs and tests; [`DpWinnowParams::solve`]
    /// is the production path.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        horizon: u64,
        dim: usize,
        rho: f64,
        epsilon: f64,
        delta: f64,
        beta: f64,
        confidence: f64,
        switching_bound: u64,
        epsilon_hat: f64,
        eta: f64,
        threshold: f64,
        sample_count: u64,
    ) -> Result<Self> {
        let params = Self {
            horizon,
            dim,
            rho,
            epsilon,
            delta,
            beta,
            confidence,
            switching_bound,
            epsilon_hat,
            eta,
            threshold,
            sample_count,
        };
        params.validate_core()?;
        Ok(params)
    }

    /// Structural range checks shared by both constructors.
    pub fn validate_core(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Parameter("dp winnow params: horizon must be positive".into()));
        }
        if self.dim == 0 {
            return Err(Error::Parameter("dp winnow params: dimension must be positive".into()));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Parameter(format!(
                "dp winnow params: rho must lie in (0, 1], got {}",
                self.rho
            )));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Parameter(format!(
                "dp winnow params: epsilon must be a positive finite real, got {}",
                self.epsilon
            )));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::Parameter(format!(
                "dp winnow params: delta must lie in [0, 1), got {}",
                self.delta
            )));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Parameter(format!(
                "dp winnow params: beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        if !(0.0..0.5).contains(&self.confidence) {
            return Err(Error::Parameter(format!(
                "dp winnow params: confidence must lie in [0, 1/2), got {}",
                self.confidence
            )));
        }
        if self.switching_bound == 0 {
            return Err(Error::Parameter(
                "dp winnow params: switching bound must be positive".into(),
            ));
        }
        if !(self.epsilon_hat > 0.0) || !self.epsilon_hat.is_finite() {
            return Err(Error::Parameter(format!(
                "dp winnow params: epsilon_hat must be a positive finite real, got {}",
                self.epsilon_hat
            )));
        }
        let eta_limit = 2.0 * (1.0 - self.confidence) * self.rho;
        if !(self.eta > 0.0 && self.eta < eta_limit) {
            return Err(Error::Parameter(format!(
                "dp winnow params: eta must lie in (0, {eta_limit}), got {}",
                self.eta
            )));
        }
        if !self.threshold.is_finite() || self.threshold <= 0.0 {
            return Err(Error::Parameter(format!(
                "dp winnow params: threshold must be a positive finite real, got {}",
                self.threshold
            )));
        }
        if self.sample_count == 0 {
            return Err(Error::Parameter(
                "dp winnow params: sample count must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Per-update potential drop `(1-c) eta rho - eta^2/2`.
    pub fn potential_drop(&self) -> f64 {
        (1.0 - self.confidence) * self.eta * self.rho - self.eta * self.eta / 2.0
    }

    /// High-probability mistake bound on margin-`rho` realizable streams:
    /// `K * 16 ln(2 T^2 / beta) / epsilon_hat`, holding with probability at
    /// least `1 - 2 beta`.
    pub fn mistake_bound(&self) -> f64 {
        let t = self.horizon as f64;
        self.switching_bound as f64 * 16.0 * (2.0 * t * t / self.beta).ln() / self.epsilon_hat
    }

    /// Residuals of the six defining relations, as `(name, error)` pairs:
    /// relative error for the real-valued equations, absolute error for the
    /// integer ones, and the relative excess of `eta` over `rho/2` for the
    /// feasibility constraint. Solver output satisfies all of them to
    /// within 1e-9.
    pub fn residuals(&self) -> Vec<(String, f64)> {
        let t = self.horizon as f64;
        let d = self.dim as f64;
        let c = self.confidence;
        let k = self.switching_bound as f64;
        let m = self.sample_count as f64;
        let log_t = (2.0 * t / self.beta).ln();
        let rel = |have: f64, want: f64| (have - want).abs() / want.abs().max(f64::MIN_POSITIVE);

        let eps_hat_want = self.epsilon / (4.0 * (2.0 * k * (2.0 / self.delta).ln()).sqrt());
        let eta_want =
            self.epsilon / (8.0 * (2.0 * m * k * (4.0 * k / self.delta).ln()).sqrt());
        let threshold_want = 8.0 * log_t / self.epsilon_hat;
        let m_want = (2.0 * log_t / (c * c * self.rho * self.rho)).ceil();
        let k_want = (d.ln() / self.potential_drop()).ceil().max(1.0);
        let eta_excess = ((self.eta - self.rho / 2.0) / (self.rho / 2.0)).max(0.0);
        vec![
            ("epsilon_hat".into(), rel(self.epsilon_hat, eps_hat_want)),
            ("eta".into(), rel(self.eta, eta_want)),
            ("threshold".into(), rel(self.threshold, threshold_want)),
            ("sample_count".into(), (m - m_want).abs()),
            ("switching_bound".into(), (k - k_want).abs()),
            ("eta_below_half_rho".into(), eta_excess),
        ]
    }

    /// Largest residual; solver output keeps this at most 1e-9.
    pub fn max_residual(&self) -> f64 {
        self.residuals()
            .into_iter()
            .map(|(_, r)| r)
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Sampled public weights
// ---------------------------------------------------------------------------

/// The empirical distribution of `draws` i.i.d. categorical draws from a
/// weight vector: every entry is an exact multiple of `1/draws`, at most
/// `draws` entries are nonzero, and they sum to exactly 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxWeights {
    counts: Vec<u64>,
    draws: u64,
}

impl ApproxWeights {
    /// Draws `draws` coordinates from `w` and tabulates them.
    pub fn sample(w: &WeightVector, draws: u64, source: &mut RandomSource) -> Result<Self> {
        if draws == 0 {
            return Err(Error::Parameter("approx weights: need at least one draw".into()));
        }
        let probs = w.probs();
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut total = 0.0;
        for &p in &probs {
            total += p;
            cumulative.push(total);
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Parameter(format!(
                "approx weights: weights sum to {total}, cannot sample"
            )));
        }
        let mut counts = vec![0u64; probs.len()];
        for _ in 0..draws {
            let target = source.uniform() * total;
            let idx = cumulative.partition_point(|&cum| cum <= target);
            counts[idx.min(probs.len() - 1)] += 1;
        }
        Ok(Self { counts, draws })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of nonzero entries (at most `draws`).
    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// The entries as reals, `counts[i] / draws`.
    pub fn probs(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.draws as f64)
            .collect()
    }

    /// `<w_tilde, x>` computed exactly in integers before the final division.
    pub fn inner(&self, x: &[i8]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        let signed: i64 = self
            .counts
            .iter()
            .zip(x)
            .map(|(&c, &xi)| c as i64 * i64::from(xi))
            .sum();
        Ok(signed as f64 / self.draws as f64)
    }

    /// `sgn(<w_tilde, x>)` with `sgn(0) = +1`.
    pub fn predict(&self, x: &[i8]) -> Result<i8> {
        Ok(sgn(self.inner(x)?))
    }
}

/// Samples a public approximation of `w` from `m` categorical draws.
pub fn sample_approx_weights(
    w: &WeightVector,
    m: u64,
    source: &mut RandomSource,
) -> Result<ApproxWeights> {
    ApproxWeights::sample(w, m, source)
}

// ---------------------------------------------------------------------------
// Public history
// ---------------------------------------------------------------------------

/// One public weight switch: the 1-based round it happened in and the vector
/// released at that point.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchEvent {
    pub round: u64,
    pub released: ApproxWeights,
}

/// Everything an observer of the learner sees: the initial public vector and
/// the sequence of switches.
#[derive(Clone, Debug, PartialEq)]
pub struct PublicHistory {
    pub dim: usize,
    pub initial: ApproxWeights,
    pub events: Vec<SwitchEvent>,
}

impl PublicHistory {
    /// The 1-based rounds at which the public weights switched.
    pub fn update_rounds(&self) -> Vec<u64> {
        self.events.iter().map(|e| e.round).collect()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Replays a public history against the stream prefix it was produced on and
/// returns the shadow weight vector at the end of the prefix.
///
/// The shadow is a deterministic function of the public view and the data:
/// within each epoch the update example is the first prefix example the
/// then-active public vector misclassifies, and an epoch with no such example
/// (a purely noise-induced switch) leaves the shadow unchanged. The result
/// matches the live learner's shadow exactly.
pub fn recompute_from_history(
    history: &PublicHistory,
    prefix: &[OnlineExample],
    eta: f64,
) -> Result<WeightVector> {
    if history.initial.dim() != history.dim {
        return Err(Error::InvalidHistory(format!(
            "initial weights have dimension {}, history says {}",
            history.initial.dim(),
            history.dim
        )));
    }
    for (i, ex) in prefix.iter().enumerate() {
        if ex.dim() != history.dim {
            return Err(Error::InvalidHistory(format!(
                "prefix example {i} has dimension {}, history says {}",
                ex.dim(),
                history.dim
            )));
        }
    }
    let mut shadow = WeightVector::uniform(history.dim)?;
    let mut active = &history.initial;
    let mut epoch_start = 0u64; // rounds fully processed before the epoch
    for (j, event) in history.events.iter().enumerate() {
        if event.round <= epoch_start {
            return Err(Error::InvalidHistory(format!(
                "event {j} at round {} does not follow the previous event at round {epoch_start}",
                event.round
            )));
        }
        if event.round > prefix.len() as u64 {
            return Err(Error::InvalidHistory(format!(
                "event {j} at round {} lies beyond the prefix of length {}",
                event.round,
                prefix.len()
            )));
        }
        if event.released.dim() != history.dim {
            return Err(Error::InvalidHistory(format!(
                "event {j} releases weights of dimension {}, history says {}",
                event.released.dim(),
                history.dim
            )));
        }
        let first_mistake = prefix[epoch_start as usize..event.round as usize]
            .iter()
            .find(|ex| active.predict(&ex.x).expect("dimension checked") != ex.y);
        if let Some(ex) = first_mistake {
            shadow.mw_update(&ex.x, ex.y, eta)?;
        }
        active = &event.released;
        epoch_start = event.round;
    }
    Ok(shadow)
}

// ---------------------------------------------------------------------------
// The learner
// ---------------------------------------------------------------------------

/// Live state of a private Winnow run.
#[derive(Clone, Debug)]
pub struct DpWinnow {
    params: DpWinnowParams,
    mode: NoiseMode,
    shadow: WeightVector,
    public: ApproxWeights,
    svt: AboveThreshold,
    cache: Vec<OnlineExample>,
    epoch_mistakes: u64,
    switches: u64,
    epoch_start: u64,
    rounds_seen: u64,
    history: PublicHistory,
}

impl DpWinnow {
    /// Initializes the shadow to uniform, samples the first public vector,
    /// and opens the first above-threshold instance.
    pub fn new(
        params: DpWinnowParams,
        mode: NoiseMode,
        source: &mut RandomSource,
    ) -> Result<Self> {
        params.validate_core()?;
        let shadow = WeightVector::uniform(params.dim)?;
        let public = ApproxWeights::sample(&shadow, params.sample_count, source)?;
        let svt = AboveThreshold::initialize(
            params.epsilon_hat,
            params.threshold,
            params.beta,
            source,
            mode,
        )?;
        let history = PublicHistory { dim: params.dim, initial: public.clone(), events: vec![] };
        Ok(Self {
            params,
            mode,
            shadow,
            public,
            svt,
            cache: Vec::new(),
            epoch_mistakes: 0,
            switches: 0,
            epoch_start: 0,
            rounds_seen: 0,
            history,
        })
    }

    pub fn params(&self) -> &DpWinnowParams {
        &self.params
    }

    /// Number of public weight switches so far (`k <= K`).
    pub fn switches(&self) -> u64 {
        self.switches
    }

    /// Rounds fully processed before the current epoch began (`t_p`).
    pub fn epoch_start(&self) -> u64 {
        self.epoch_start
    }

    pub fn rounds_seen(&self) -> u64 {
        self.rounds_seen
    }

    /// Mistakes accumulated in the current epoch.
    pub fn epoch_mistakes(&self) -> u64 {
        self.epoch_mistakes
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn shadow(&self) -> &WeightVector {
        &self.shadow
    }

    pub fn public_weights(&self) -> &ApproxWeights {
        &self.public
    }

    pub fn history(&self) -> &PublicHistory {
        &self.history
    }

    /// Whether the switching budget fired its last instance: no further
    /// updates are possible and the public weights are frozen.
    pub fn is_frozen(&self) -> bool {
        self.svt.is_halted()
    }

    /// Prediction on `x` without advancing the state.
    pub fn predict(&self, x: &[i8]) -> Result<i8> {
        self.public.predict(x)
    }

    /// Processes one round; see the module docs for the flow. Returns the
    /// prediction and whether a public weight switch happened.
    pub fn round(&mut self, x: &[i8], y: i8, source: &mut RandomSource) -> Result<(i8, bool)> {
        if self.rounds_seen >= self.params.horizon {
            return Err(Error::State(format!(
                "dp winnow: round {} exceeds the horizon {}",
                self.rounds_seen + 1,
                self.params.horizon
            )));
        }
        if y != 1 && y != -1 {
            return Err(Error::Parameter(format!(
                "dp winnow: label must be +1 or -1, got {y}"
            )));
        }
        let prediction = self.public.predict(x)?;
        self.rounds_seen += 1;
        if prediction != y {
            self.cache.push(OnlineExample { x: x.to_vec(), y });
            self.epoch_mistakes += 1;
        }
        let mut updated = false;
        if !self.svt.is_halted() {
            let fired = self.svt.test(self.epoch_mistakes as f64, source)?;
            if fired && self.switches < self.params.switching_bound {
                if let Some(first) = self.cache.first() {
                    self.shadow.mw_update(&first.x, first.y, self.params.eta)?;
                }
                self.public =
                    ApproxWeights::sample(&self.shadow, self.params.sample_count, source)?;
                self.switches += 1;
                self.cache.clear();
                self.epoch_mistakes = 0;
                self.epoch_start = self.rounds_seen;
                self.svt = AboveThreshold::initialize(
                    self.params.epsilon_hat,
                    self.params.threshold,
                    self.params.beta,
                    source,
                    self.mode,
                )?;
                self.history.events.push(SwitchEvent {
                    round: self.rounds_seen,
                    released: self.public.clone(),
                });
                updated = true;
            }
            // A fire at the budget leaves the halted instance in place: the
            // learner is frozen from here on.
        }
        Ok((prediction, updated))
    }
}

/// Runs the private learner over a stream (length at most the horizon) and
/// returns the per-round transcript. The `update` column marks public weight
/// switches and `updates_so_far` carries the switch counter `k`.
pub fn run_dp_winnow(
    stream: &[OnlineExample],
    params: DpWinnowParams,
    mode: NoiseMode,
    source: &mut RandomSource,
) -> Result<RunTranscript> {
    run_dp_winnow_with_state(stream, params, mode, source).map(|(t, _)| t)
}

/// As [`run_dp_winnow`], also returning the final learner state (public
/// history, shadow vector, switch counter).
pub fn run_dp_winnow_with_state(
    stream: &[OnlineExample],
    params: DpWinnowParams,
    mode: NoiseMode,
    source: &mut RandomSource,
) -> Result<(RunTranscript, DpWinnow)> {
    if stream.len() as u64 > params.horizon {
        return Err(Error::Parameter(format!(
            "dp winnow: stream length {} exceeds the horizon {}",
            stream.len(),
            params.horizon
        )));
    }
    let mut learner = DpWinnow::new(params, mode, source)?;
    let mut transcript = RunTranscript::default();
    for (t, ex) in stream.iter().enumerate() {
        let epoch = learner.switches();
        let (prediction, update) = learner.round(&ex.x, ex.y, source)?;
        transcript.push(RoundRecord {
            round: t as u64 + 1,
            prediction,
            label: ex.y,
            mistake: prediction != ex.y,
            update,
            updates_so_far: learner.switches(),
            epoch,
        });
    }
    Ok((transcript, learner))
}
