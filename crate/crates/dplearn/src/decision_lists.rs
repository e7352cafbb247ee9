//! Decision lists over boolean features, and learners for them.
//!
//! A decision list is an ordered sequence of rules `(f_1, b_1), ...,
//! (f_r, b_r)` plus a default bit: the label of `x` is the bit of the first
//! feature that fires on `x`, or the default if none does. Features come from
//! a [`FeatureFamily`] — plain literals, literals with negations, or all
//! conjunctions of at most `k` signed literals.
//!
//! Two learners are provided:
//!
//! * [`rivest_greedy`]: the classical non-private greedy learner. On a sample
//!   realizable by a decision list over the family it always finds a
//!   consistent list, because whenever examples remain either some rule of a
//!   consistent target fires on one of them without error, or all remaining
//!   examples share a label.
//! * [`dp_greedy_cover`]: the differentially private variant. Each round
//!   scores every remaining `(feature, bit)` pair by
//!   `q(S_j, (f, b)) = -#{x in S_j : f(x) = 1 and label(x) = 1 - b}`
//!   (a sensitivity-1 quality), selects a pair with the exponential
//!   mechanism at `epsilon_per_round`, appends it, removes the covered
//!   examples, and retires the feature. A constant-true feature is appended
//!   to the candidate set, so the run lasts exactly `|family| + 1` rounds and
//!   every example ends up covered. With probability at least `1 - beta` the
//!   resulting list mislabels at most
//!   `(4 M / epsilon) * ln(sqrt(2 / beta) * M)` sample points, where `M`
//!   counts the candidates including the constant-true rule
//!   ([`cover_error_bound`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::{em_select, NoiseMode};
use crate::randomness::RandomSource;

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

/// A possibly negated variable inside a conjunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedLiteral {
    pub index: usize,
    pub negated: bool,
}

/// The semantic kind of a boolean feature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    /// `x_i`.
    Literal(usize),
    /// `not x_i`.
    NegatedLiteral(usize),
    /// A conjunction of signed literals; the empty conjunction is `true`.
    Conjunction(Vec<SignedLiteral>),
    /// The constant-true feature.
    ConstantTrue,
}

impl FeatureKind {
    /// Largest variable index referenced, if any.
    pub fn max_index(&self) -> Option<usize> {
        match self {
            FeatureKind::Literal(i) | FeatureKind::NegatedLiteral(i) => Some(*i),
            FeatureKind::Conjunction(lits) => lits.iter().map(|l| l.index).max(),
            FeatureKind::ConstantTrue => None,
        }
    }
}

/// A feature with a family-local identifier. Identifiers order candidates for
/// deterministic tie-breaking; evaluation depends only on the kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Feature {
    pub id: usize,
    pub kind: FeatureKind,
}

impl Feature {
    /// Evaluates the feature on a bit vector. Indices must lie within `x`.
    pub fn evaluate(&self, x: &[bool]) -> bool {
        match &self.kind {
            FeatureKind::Literal(i) => x[*i],
            FeatureKind::NegatedLiteral(i) => !x[*i],
            FeatureKind::Conjunction(lits) => lits.iter().all(|l| x[l.index] != l.negated),
            FeatureKind::ConstantTrue => true,
        }
    }
}

/// Number of conjunctions of at most `width` signed literals over `d`
/// variables: `sum_{j=0}^{width} 2^j * C(d, j)`.
pub fn conjunction_count(d: usize, width: usize) -> Result<u128> {
    if width > d {
        return Err(Error::Parameter(format!(
            "conjunction_count: width {width} exceeds dimension {d}"
        )));
    }
    let mut total: u128 = 0;
    for j in 0..=width {
        let choose = binomial(d as u128, j as u128).ok_or_else(|| {
            Error::Parameter(format!("conjunction_count: overflow at d={d}, width={width}"))
        })?;
        let term = (1u128 << j).checked_mul(choose).ok_or_else(|| {
            Error::Parameter(format!("conjunction_count: overflow at d={d}, width={width}"))
        })?;
        total = total.checked_add(term).ok_or_else(|| {
            Error::Parameter(format!("conjunction_count: overflow at d={d}, width={width}"))
        })?;
    }
    Ok(total)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// An ordered set of candidate features over `{0,1}^dim`.
#[derive(Clone, Debug)]
pub struct FeatureFamily {
    features: Vec<Feature>,
    dim: usize,
    descriptor: String,
}

/// Families larger than this are refused at construction.
pub const FAMILY_SIZE_CAP: usize = 1_000_000;

impl FeatureFamily {
    /// The `d` plain (monotone) literals `x_0, ..., x_{d-1}`.
    pub fn literals(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("feature family: dimension must be positive".into()));
        }
        let features = (0..dim)
            .map(|i| Feature { id: i, kind: FeatureKind::Literal(i) })
            .collect();
        Ok(Self { features, dim, descriptor: format!("literals(d={dim})") })
    }

    /// The `2d` literals `x_0, not x_0, x_1, not x_1, ...`.
    pub fn literals_with_negations(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("feature family: dimension must be positive".into()));
        }
        let mut features = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            features.push(Feature { id: 2 * i, kind: FeatureKind::Literal(i) });
            features.push(Feature { id: 2 * i + 1, kind: FeatureKind::NegatedLiteral(i) });
        }
        Ok(Self {
            features,
            dim,
            descriptor: format!("literals_with_negations(d={dim})"),
        })
    }

    /// All conjunctions of at most `width` signed literals, in deterministic
    /// order: by conjunction size, then by index combination
    /// (lexicographically), then by sign pattern (bit `t` of the pattern set
    /// means literal `t` of the combination is negated). The empty
    /// conjunction (constant true) comes first.
    pub fn conjunctions(dim: usize, width: usize) -> Result<Self> {
        Self::conjunctions_capped(dim, width, FAMILY_SIZE_CAP)
    }

    /// As [`FeatureFamily::conjunctions`], with an explicit size cap.
    pub fn conjunctions_capped(dim: usize, width: usize, cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("feature family: dimension must be positive".into()));
        }
        if width > dim {
            return Err(Error::Parameter(format!(
                "feature family: conjunction width {width} exceeds dimension {dim}"
            )));
        }
        let count = conjunction_count(dim, width)?;
        if count > cap as u128 {
            return Err(Error::Parameter(format!(
                "feature family: {count} conjunctions exceed the cap of {cap}"
            )));
        }
        let mut features = Vec::with_capacity(count as usize);
        for size in 0..=width {
            for combo in combinations(dim, size) {
                for pattern in 0u64..(1u64 << size) {
                    let lits: Vec<SignedLiteral> = combo
                        .iter()
                        .enumerate()
                        .map(|(t, &index)| SignedLiteral {
                            index,
                            negated: (pattern >> t) & 1 == 1,
                        })
                        .collect();
                    let id = features.len();
                    features.push(Feature { id, kind: FeatureKind::Conjunction(lits) });
                }
            }
        }
        debug_assert_eq!(features.len() as u128, count);
        Ok(Self {
            features,
            dim,
            descriptor: format!("conjunctions(d={dim}, width={width})"),
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn get(&self, id: usize) -> Option<&Feature> {
        self.features.get(id)
    }
}

/// All `size`-subsets of `0..dim` in lexicographic order.
fn combinations(dim: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
        return out;
    }
    if size > dim {
        return out;
    }
    let mut combo: Vec<usize> = (0..size).collect();
    loop {
        out.push(combo.clone());
        // Advance to the next combination.
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + dim - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in i + 1..size {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Decision lists
// ---------------------------------------------------------------------------

/// One rule of a decision list.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub feature: Feature,
    pub bit: bool,
}

/// An ordered rule list with a default bit; total on `{0,1}^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionList {
    pub terms: Vec<Term>,
    pub default_bit: bool,
}

impl DecisionList {
    /// Builds a list, rejecting repeated features (by kind).
    pub fn new(terms: Vec<Term>, default_bit: bool) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            for u in &terms[..i] {
                if u.feature.kind == t.feature.kind {
                    return Err(Error::Parameter(format!(
                        "decision list: feature {:?} appears twice",
                        t.feature.kind
                    )));
                }
            }
        }
        Ok(Self { terms, default_bit })
    }

    /// Number of rules (excluding the default).
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest dimension this list can be evaluated on.
    pub fn required_dim(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| t.feature.kind.max_index())
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    /// Evaluates the list: the bit of the first firing rule, else the default.
    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        let need = self.required_dim();
        if x.len() < need {
            return Err(Error::DimensionMismatch { expected: need, got: x.len() });
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[bool]) -> bool {
        for t in &self.terms {
            if t.feature.evaluate(x) {
                return t.bit;
            }
        }
        self.default_bit
    }

    /// Number of sign changes along the rule bits `b_1, ..., b_r`.
    pub fn alternations(&self) -> usize {
        self.terms
            .windows(2)
            .filter(|w| w[0].bit != w[1].bit)
            .count()
    }

    /// Number of sign changes along `b_1, ..., b_r, default`.
    pub fn extended_alternations(&self) -> usize {
        let mut alt = self.alternations();
        if let Some(last) = self.terms.last() {
            if last.bit != self.default_bit {
                alt += 1;
            }
        }
        alt
    }
}

// ---------------------------------------------------------------------------
// Samples
// ---------------------------------------------------------------------------

/// One labeled boolean example.
#[derive(Clone, Debug, PartialEq)]
pub struct PacExample {
    pub x: Vec<bool>,
    pub label: bool,
}

/// A labeled sample over `{0,1}^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct PacSample {
    dim: usize,
    examples: Vec<PacExample>,
}

impl PacSample {
    /// Builds a sample, checking that every example has dimension `dim`.
    pub fn new(dim: usize, examples: Vec<PacExample>) -> Result<Self> {
        for (i, ex) in examples.iter().enumerate() {
            if ex.x.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: ex.x.len() })
                    .map_err(|e| match e {
                        Error::DimensionMismatch { expected, got } => Error::Format(format!(
                            "sample row {i}: expected {expected} features, got {got}"
                        )),
                        other => other,
                    });
            }
        }
        Ok(Self { dim, examples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[PacExample] {
        &self.examples
    }
}

/// The covering quality `q(S, (f, b)) = -#{x in S : f(x) = 1, label(x) != b}`.
/// Adding or removing one example moves the value by at most 1.
pub fn quality(sample: &PacSample, feature: &Feature, bit: bool) -> i64 {
    let mut bad = 0i64;
    for ex in sample.examples() {
        if ex.label != bit && feature.evaluate(&ex.x) {
            bad += 1;
        }
    }
    -bad
}

/// Number of examples in `sample` misclassified by `list`.
pub fn empirical_error(list: &DecisionList, sample: &PacSample) -> Result<usize> {
    let need = list.required_dim();
    if need > sample.dim() {
        return Err(Error::DimensionMismatch { expected: need, got: sample.dim() });
    }
    Ok(sample
        .examples()
        .iter()
        .filter(|ex| list.evaluate_unchecked(&ex.x) != ex.label)
        .count())
}

/// For the active examples, counts how many label-true / label-false examples
/// the feature fires on.
fn fire_counts(sample: &PacSample, active: &[usize], feature: &Feature) -> (u64, u64) {
    let mut on_true = 0u64;
    let mut on_false = 0u64;
    for &i in active {
        let ex = &sample.examples()[i];
        if feature.evaluate(&ex.x) {
            if ex.label {
                on_true += 1;
            } else {
                on_false += 1;
            }
        }
    }
    (on_true, on_false)
}

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

/// The classical greedy decision-list learner. Repeatedly appends the first
/// `(feature, bit)` pair — lowest feature id first, `bit = 0` before
/// `bit = 1` — that fires on at least one remaining example and misfires on
/// none, removing the covered examples. When no such pair exists but all
/// remaining examples agree on a label, that label becomes the default.
/// Fails with [`Error::NonRealizable`] otherwise.
pub fn rivest_greedy(sample: &PacSample, family: &FeatureFamily) -> Result<DecisionList> {
    if family.dim() != sample.dim() && !sample.is_empty() {
        return Err(Error::DimensionMismatch { expected: family.dim(), got: sample.dim() });
    }
    let mut active: Vec<usize> = (0..sample.len()).collect();
    let mut remaining: Vec<usize> = (0..family.len()).collect();
    let mut terms: Vec<Term> = Vec::new();
    loop {
        if active.is_empty() {
            return Ok(DecisionList { terms, default_bit: false });
        }
        let mut chosen: Option<(usize, bool)> = None;
        'scan: for (pos, &fid) in remaining.iter().enumerate() {
            let feature = &family.features()[fid];
            let (on_true, on_false) = fire_counts(sample, &active, feature);
            if on_true == 0 && on_false > 0 {
                chosen = Some((pos, false));
                break 'scan;
            }
            if on_false == 0 && on_true > 0 {
                chosen = Some((pos, true));
                break 'scan;
            }
        }
        match chosen {
            Some((pos, bit)) => {
                let fid = remaining.remove(pos);
                let feature = family.features()[fid].clone();
                active.retain(|&i| !feature.evaluate(&sample.examples()[i].x));
                terms.push(Term { feature, bit });
            }
            None => {
                let first = sample.examples()[active[0]].label;
                if active.iter().all(|&i| sample.examples()[i].label == first) {
                    return Ok(DecisionList { terms, default_bit: first });
                }
                return Err(Error::NonRealizable(format!(
                    "no consistent covering rule over {} for {} remaining examples",
                    family.descriptor(),
                    active.len()
                )));
            }
        }
    }
}

/// Per-round diagnostics of a private greedy-cover run.
#[derive(Clone, Debug)]
pub struct CoverRound {
    /// Identifier of the selected feature (`family.len()` denotes the
    /// appended constant-true candidate).
    pub selected_id: usize,
    pub bit: bool,
    /// Quality of the selected pair on the active examples.
    pub selected_quality: i64,
    /// Best quality over all remaining pairs this round.
    pub best_quality: i64,
    /// Active (uncovered) examples entering the round.
    pub active_before: usize,
    /// Examples covered by the selected feature this round.
    pub covered: usize,
}

/// Full trace of a private greedy-cover run.
#[derive(Clone, Debug, Default)]
pub struct CoverTrace {
    pub rounds: Vec<CoverRound>,
}

/// Differentially private greedy cover; see the module docs for the quality
/// function and round structure. Runs exactly `family.len() + 1` rounds, one
/// per candidate (the family plus a constant-true rule); each round spends
/// `epsilon_per_round` through the exponential mechanism, including rounds
/// where no example remains uncovered. The returned list carries every
/// selected rule in order; the bit chosen for the constant-true rule becomes
/// the default bit (rules behind it are unreachable but harmless).
pub fn dp_greedy_cover(
    sample: &PacSample,
    family: &FeatureFamily,
    epsilon_per_round: f64,
    source: &mut RandomSource,
    mode: NoiseMode,
) -> Result<DecisionList> {
    dp_greedy_cover_traced(sample, family, epsilon_per_round, source, mode).map(|(list, _)| list)
}

/// As [`dp_greedy_cover`], also returning per-round diagnostics.
pub fn dp_greedy_cover_traced(
    sample: &PacSample,
    family: &FeatureFamily,
    epsilon_per_round: f64,
    source: &mut RandomSource,
    mode: NoiseMode,
) -> Result<(DecisionList, CoverTrace)> {
    if family.dim() != sample.dim() && !sample.is_empty() {
        return Err(Error::DimensionMismatch { expected: family.dim(), got: sample.dim() });
    }
    if !(epsilon_per_round > 0.0) || !epsilon_per_round.is_finite() {
        return Err(Error::Parameter(format!(
            "dp_greedy_cover: epsilon_per_round must be a positive finite real, got {epsilon_per_round}"
        )));
    }
    let mut candidates: Vec<Feature> = family.features().to_vec();
    candidates.push(Feature { id: family.len(), kind: FeatureKind::ConstantTrue });

    let mut active: Vec<usize> = (0..sample.len()).collect();
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let mut terms: Vec<Term> = Vec::with_capacity(candidates.len());
    let mut default_bit = false;
    let mut trace = CoverTrace::default();

    let rounds = candidates.len();
    for _ in 0..rounds {
        // Score remaining pairs in (feature id, bit) order so the zero-noise
        // argmax breaks ties toward the lowest id, bit 0 before bit 1.
        let mut scores = Vec::with_capacity(remaining.len() * 2);
        for &ci in &remaining {
            let (on_true, on_false) = fire_counts(sample, &active, &candidates[ci]);
            scores.push(-(on_true as f64)); // bit = 0 errs on label-true examples
            scores.push(-(on_false as f64)); // bit = 1 errs on label-false examples
        }
        let idx = em_select(&scores, epsilon_per_round, source, mode)?;
        let (pos, bit) = (idx / 2, idx % 2 == 1);
        let ci = remaining.remove(pos);
        let feature = candidates[ci].clone();

        let active_before = active.len();
        active.retain(|&i| !feature.evaluate(&sample.examples()[i].x));
        let covered = active_before - active.len();
        if feature.kind == FeatureKind::ConstantTrue {
            default_bit = bit;
        }
        trace.rounds.push(CoverRound {
            selected_id: feature.id,
            bit,
            selected_quality: scores[idx] as i64,
            best_quality: scores.iter().copied().fold(f64::NEG_INFINITY, f64::max) as i64,
            active_before,
            covered,
        });
        terms.push(Term { feature, bit });
    }
    debug_assert!(active.is_empty(), "constant-true covers everything");
    Ok((DecisionList { terms, default_bit }, trace))
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// Empirical-error bound of the private cover: with probability at least
/// `1 - beta`, the list errs on at most
/// `(4 M / epsilon_per_round) * ln(sqrt(2 / beta) * M)` sample points, where
/// `M` is the number of candidates (family size plus the constant-true rule).
pub fn cover_error_bound(num_candidates: u64, epsilon_per_round: f64, beta: f64) -> Result<f64> {
    if num_candidates == 0 {
        return Err(Error::Parameter("cover_error_bound: need at least one candidate".into()));
    }
    if !(epsilon_per_round > 0.0) || !epsilon_per_round.is_finite() {
        return Err(Error::Parameter(format!(
            "cover_error_bound: epsilon_per_round must be a positive finite real, got {epsilon_per_round}"
        )));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter(format!(
            "cover_error_bound: beta must lie in (0, 1), got {beta}"
        )));
    }
    let m = num_candidates as f64;
    Ok(4.0 * m / epsilon_per_round * ((2.0 / beta).sqrt() * m).ln())
}

/// Per-round budget that makes an `M + 1`-round cover run
/// `(epsilon, delta)`-private overall:
/// `epsilon / (2 * (ln(1/delta) + 3/2))`.
pub fn epsilon_per_round_for(epsilon_total: f64, delta: f64) -> Result<f64> {
    if !(epsilon_total > 0.0) || !epsilon_total.is_finite() {
        return Err(Error::Parameter(format!(
            "epsilon_per_round_for: epsilon must be a positive finite real, got {epsilon_total}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!(
            "epsilon_per_round_for: delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(epsilon_total / (2.0 * ((1.0 / delta).ln() + 1.5)))
}

/// Sample size sufficient for `(alpha, beta)`-accurate private PAC learning
/// over `num_features` candidate features with the stated VC dimension:
/// the larger of
/// `(64/alpha) * (vc * ln(64/alpha) + ln(16/beta))` and
/// `8 M * ln(2 M / sqrt(beta)) * (2 ln(1/delta) + 3/2) / (alpha * epsilon)`,
/// rounded up.
pub fn pac_sample_bound(
    num_features: u64,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    delta: f64,
    vc: f64,
) -> Result<u64> {
    if num_features == 0 {
        return Err(Error::Parameter("pac_sample_bound: need at least one feature".into()));
    }
    for (name, v, lo, hi) in [
        ("alpha", alpha, 0.0, 1.0),
        ("beta", beta, 0.0, 1.0),
        ("delta", delta, 0.0, 1.0),
    ] {
        if !(v > lo && v < hi) {
            return Err(Error::Parameter(format!(
                "pac_sample_bound: {name} must lie in (0, 1), got {v}"
            )));
        }
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!(
            "pac_sample_bound: epsilon must be a positive finite real, got {epsilon}"
        )));
    }
    if !(vc > 0.0) || !vc.is_finite() {
        return Err(Error::Parameter(format!(
            "pac_sample_bound: vc must be a positive finite real, got {vc}"
        )));
    }
    let m = num_features as f64;
    let statistical = 64.0 / alpha * (vc * (64.0 / alpha).ln() + (16.0 / beta).ln());
    let private =
        8.0 * m * (2.0 * m / beta.sqrt()).ln() * (2.0 * (1.0 / delta).ln() + 1.5) / (alpha * epsilon);
    Ok(statistical.max(private).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lit(id: usize, index: usize) -> Feature {
        Feature { id, kind: FeatureKind::Literal(index) }
    }

    fn sample_from(rows: &[(&[u8], u8)], dim: usize) -> PacSample {
        let examples = rows
            .iter()
            .map(|(bits, label)| PacExample {
                x: bits.iter().map(|&b| b == 1).collect(),
                label: *label == 1,
            })
            .collect();
        PacSample::new(dim, examples).unwrap()
    }

    #[test]
    fn evaluation_follows_first_firing_rule() {
        let list = DecisionList::new(
            vec![
                Term { feature: lit(0, 2), bit: true },
                Term { feature: lit(1, 0), bit: false },
            ],
            true,
        )
        .unwrap();
        assert!(list.evaluate(&[false, false, true]).unwrap());
        assert!(!list.evaluate(&[true, false, false]).unwrap());
        assert!(list.evaluate(&[false, true, false]).unwrap()); // default
        assert!(matches!(
            list.evaluate(&[true]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn repeated_features_are_rejected() {
        let dup = DecisionList::new(
            vec![
                Term { feature: lit(0, 1), bit: true },
                Term { feature: lit(5, 1), bit: false },
            ],
            false,
        );
        assert!(dup.is_err());
    }

    #[test]
    fn alternation_counting() {
        let list = DecisionList::new(
            vec![
                Term { feature: lit(0, 0), bit: true },
                Term { feature: lit(1, 1), bit: true },
                Term { feature: lit(2, 2), bit: false },
            ],
            true,
        )
        .unwrap();
        assert_eq!(list.alternations(), 1);
        assert_eq!(list.extended_alternations(), 2);
    }

    #[test]
    fn conjunction_family_counts_match_formula() {
        // d=3, width 1: empty conjunction + 2*3 signed singletons = 7.
        assert_eq!(conjunction_count(3, 1).unwrap(), 7);
        let fam = FeatureFamily::conjunctions(3, 1).unwrap();
        assert_eq!(fam.len(), 7);
        // d=4, width 2: 1 + 8 + 4*6 = 33.
        assert_eq!(conjunction_count(4, 2).unwrap(), 33);
        assert_eq!(FeatureFamily::conjunctions(4, 2).unwrap().len(), 33);
        // The count stays below e^2 * d^width.
        for d in 1..=12usize {
            for width in 0..=3usize.min(d) {
                let count = conjunction_count(d, width).unwrap() as f64;
                let cap = std::f64::consts::E.powi(2) * (d as f64).powi(width as i32);
                assert!(count <= cap, "d={d} width={width}: {count} > {cap}");
            }
        }
        assert!(FeatureFamily::conjunctions(2, 3).is_err());
        assert!(FeatureFamily::conjunctions_capped(20, 3, 100).is_err());
    }

    #[test]
    fn conjunction_evaluation() {
        let fam = FeatureFamily::conjunctions(3, 2).unwrap();
        // First feature is the empty conjunction: constant true.
        assert!(fam.features()[0].evaluate(&[false, false, false]));
        // Find (x0 and not x2) and check it.
        let f = fam
            .features()
            .iter()
            .find(|f| {
                f.kind
                    == FeatureKind::Conjunction(vec![
                        SignedLiteral { index: 0, negated: false },
                        SignedLiteral { index: 2, negated: true },
                    ])
            })
            .expect("conjunction present");
        assert!(f.evaluate(&[true, false, false]));
        assert!(!f.evaluate(&[true, false, true]));
        assert!(!f.evaluate(&[false, true, false]));
    }

    #[test]
    fn quality_counts_misfired_examples() {
        let s = sample_from(
            &[(&[1, 0], 1), (&[1, 1], 0), (&[0, 1], 0), (&[1, 0], 0)],
            2,
        );
        let f = lit(0, 0); // fires on rows 0, 1, 3 with labels 1, 0, 0
        assert_eq!(quality(&s, &f, true), -2);
        assert_eq!(quality(&s, &f, false), -1);
        let t = Feature { id: 9, kind: FeatureKind::ConstantTrue };
        assert_eq!(quality(&s, &t, true), -3);
        assert_eq!(quality(&s, &t, false), -1);
    }

    proptest! {
        /// Adding one example moves the quality by at most 1, and leaves it
        /// unchanged when the feature does not fire on the new example.
        #[test]
        fn quality_sensitivity_is_one(
            rows in prop::collection::vec((prop::collection::vec(any::<bool>(), 4), any::<bool>()), 0..30),
            z in (prop::collection::vec(any::<bool>(), 4), any::<bool>()),
            feat_index in 0usize..4,
            negate in any::<bool>(),
            bit in any::<bool>(),
        ) {
            let base: Vec<PacExample> =
                rows.iter().map(|(x, l)| PacExample { x: x.clone(), label: *l }).collect();
            let mut extended = base.clone();
            extended.push(PacExample { x: z.0.clone(), label: z.1 });
            let s0 = PacSample::new(4, base).unwrap();
            let s1 = PacSample::new(4, extended).unwrap();
            let feature = Feature {
                id: 0,
                kind: if negate {
                    FeatureKind::NegatedLiteral(feat_index)
                } else {
                    FeatureKind::Literal(feat_index)
                },
            };
            let dq = quality(&s1, &feature, bit) - quality(&s0, &feature, bit);
            prop_assert!(dq.abs() <= 1);
            if !feature.evaluate(&z.0) {
                prop_assert_eq!(dq, 0);
            }
        }
    }

    #[test]
    fn rivest_learns_realizable_samples() {
        let mut src = RandomSource::new(404);
        for trial in 0..100 {
            let d = 10;
            let fam = FeatureFamily::literals_with_negations(d).unwrap();
            // Random target over the family.
            let r = 1 + trial % 6;
            let target = crate::streams::random_decision_list(
                &fam,
                r,
                (trial % r.max(1)).min(r.saturating_sub(1)),
                &mut src,
            )
            .unwrap();
            let sample =
                crate::streams::pac_sample(&target, d, &crate::streams::PacDistribution::Uniform, 64, &mut src)
                    .unwrap();
            let learned = rivest_greedy(&sample, &fam).unwrap();
            assert_eq!(empirical_error(&learned, &sample).unwrap(), 0, "trial {trial}");
        }
    }

    #[test]
    fn rivest_rejects_parity() {
        // XOR labels over two variables are not expressible as a decision
        // list of literals: every literal fires on one example of each label.
        let s = sample_from(
            &[(&[0, 0], 0), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 0)],
            2,
        );
        let fam = FeatureFamily::literals_with_negations(2).unwrap();
        assert!(matches!(rivest_greedy(&s, &fam), Err(Error::NonRealizable(_))));
    }

    #[test]
    fn rivest_uses_default_for_uncoverable_remainder() {
        // All-zero example cannot be covered by monotone literals, but a
        // uniform label lets the default absorb it.
        let s = sample_from(&[(&[0, 0], 1), (&[1, 0], 1)], 2);
        let fam = FeatureFamily::literals(2).unwrap();
        let list = rivest_greedy(&s, &fam).unwrap();
        assert_eq!(empirical_error(&list, &s).unwrap(), 0);
    }

    #[test]
    fn zero_noise_cover_is_consistent_on_realizable_samples() {
        let mut src = RandomSource::new(808);
        for trial in 0..25 {
            let d = 6;
            let fam = FeatureFamily::literals_with_negations(d).unwrap();
            let r = 1 + trial % 4;
            let target =
                crate::streams::random_decision_list(&fam, r, 0, &mut src).unwrap();
            let sample = crate::streams::pac_sample(
                &target,
                d,
                &crate::streams::PacDistribution::Uniform,
                48,
                &mut src,
            )
            .unwrap();
            let (list, trace) = dp_greedy_cover_traced(
                &sample,
                &fam,
                1.0,
                &mut src,
                NoiseMode::ZeroNoise,
            )
            .unwrap();
            // Every round has a zero-quality pair available and picks one.
            for (j, round) in trace.rounds.iter().enumerate() {
                assert_eq!(round.best_quality, 0, "trial {trial} round {j}");
                assert_eq!(round.selected_quality, 0, "trial {trial} round {j}");
            }
            assert_eq!(empirical_error(&list, &sample).unwrap(), 0, "trial {trial}");
        }
    }

    #[test]
    fn cover_runs_one_round_per_candidate_and_consumes_constant_true() {
        let s = sample_from(&[(&[1, 0], 1), (&[0, 1], 0)], 2);
        let fam = FeatureFamily::literals(2).unwrap();
        let mut src = RandomSource::new(5);
        let (list, trace) =
            dp_greedy_cover_traced(&s, &fam, 0.5, &mut src, NoiseMode::Standard).unwrap();
        assert_eq!(list.len(), fam.len() + 1);
        assert_eq!(trace.rounds.len(), fam.len() + 1);
        // No candidate repeats; constant-true appears exactly once.
        let mut ids: Vec<usize> = trace.rounds.iter().map(|r| r.selected_id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), fam.len() + 1);
        let true_terms: Vec<&Term> = list
            .terms
            .iter()
            .filter(|t| t.feature.kind == FeatureKind::ConstantTrue)
            .collect();
        assert_eq!(true_terms.len(), 1);
        assert_eq!(true_terms[0].bit, list.default_bit);
        // Active counts are non-increasing.
        for w in trace.rounds.windows(2) {
            assert!(w[1].active_before <= w[0].active_before);
        }
        assert_eq!(trace.rounds.last().unwrap().active_before, 0);
    }

    #[test]
    fn cover_accepts_empty_samples() {
        let s = PacSample::new(3, vec![]).unwrap();
        let fam = FeatureFamily::literals(3).unwrap();
        let mut src = RandomSource::new(9);
        let list = dp_greedy_cover(&s, &fam, 1.0, &mut src, NoiseMode::Standard).unwrap();
        assert_eq!(list.len(), 4);
        assert_eq!(empirical_error(&list, &s).unwrap(), 0);
    }

    #[test]
    fn cover_error_bound_value() {
        // M = 17, epsilon 0.5, beta 0.1:
        // 4*17/0.5 * ln(sqrt(20) * 17) = 136 * ln(76.026...)
        let b = cover_error_bound(17, 0.5, 0.1).unwrap();
        let expect = 136.0 * ((2.0f64 / 0.1).sqrt() * 17.0).ln();
        assert!((b - expect).abs() < 1e-9);
    }

    #[test]
    fn per_round_budget_from_total() {
        // delta = 1/e gives epsilon / 5.
        let e = epsilon_per_round_for(1.0, (-1.0f64).exp()).unwrap();
        assert!((e - 0.2).abs() < 1e-12);
        assert!(epsilon_per_round_for(0.0, 0.5).is_err());
    }

    #[test]
    fn sample_bound_matches_direct_evaluation() {
        let (m, alpha, beta, epsilon, delta, vc) = (100u64, 0.1, 0.1, 1.0, 1e-6, 8.0);
        let got = pac_sample_bound(m, alpha, beta, epsilon, delta, vc).unwrap();
        let statistical = 64.0 / alpha * (vc * (64.0f64 / alpha).ln() + (16.0f64 / beta).ln());
        let private = 8.0 * 100.0
            * (200.0f64 / beta.sqrt()).ln()
            * (2.0 * (1.0f64 / delta).ln() + 1.5)
            / (alpha * epsilon);
        assert_eq!(got, statistical.max(private).ceil() as u64);
        // As delta approaches 1 the private term shrinks toward its 3/2 floor.
        let looser = pac_sample_bound(m, alpha, beta, epsilon, 0.999, vc).unwrap();
        assert!(looser <= got);
    }
}
