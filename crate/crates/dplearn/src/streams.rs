//! Generators for realizable PAC samples and oblivious online streams with
//! known targets.
//!
//! Every generated object is re-verified against its target before release:
//! PAC rows are labeled by evaluating the target list, and every online
//! example must pass the margin check `y * <v, x> >= rho` (up to 1e-9)
//! against the target halfspace, with a generation error if rejection
//! sampling cannot sustain it.

use crate::decision_lists::{DecisionList, FeatureFamily, PacExample, PacSample, Term};
use crate::error::{Error, Result};
use crate::randomness::RandomSource;
use crate::reductions::MarginHalfspace;
use crate::winnow::{sgn, OnlineExample};

/// Margin slack for the realizability check, absorbing dot-product rounding.
const MARGIN_SLACK: f64 = 1e-9;

/// Distribution over `{0,1}^d` feature vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum PacDistribution {
    /// Each coordinate is an independent fair coin.
    Uniform,
    /// Each coordinate is an independent Bernoulli with this success
    /// probability.
    Product(f64),
    /// Explicit weights over all `2^d` points (coordinate `i` of a point is
    /// bit `i` of its index); only for small `d`.
    Custom(Vec<f64>),
}

/// Largest dimension accepted for [`PacDistribution::Custom`].
pub const CUSTOM_DIST_MAX_DIM: usize = 20;

/// Distribution over `{-1,+1}^d` online feature vectors (always filtered by
/// the target's margin).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamDistribution {
    /// Uniform signs, rejection-filtered by the margin check.
    UniformSigns,
    /// Stress mode: each emitted example is the smallest-|inner product|
    /// point among 16 margin-passing candidates, concentrating mass near the
    /// decision boundary.
    BoundaryHeavy,
}

/// Candidates inspected per emitted example in boundary-heavy mode.
const BOUNDARY_CANDIDATES: usize = 16;

/// Draws a decision list with `r` uniformly random distinct features from
/// the family and bits arranged to have exactly `alternations` sign changes.
/// The default bit extends the last block (so the alternation count is the
/// same whether or not the default is included); for `r = 0` the default is
/// a fair coin.
pub fn random_decision_list(
    family: &FeatureFamily,
    r: usize,
    alternations: usize,
    source: &mut RandomSource,
) -> Result<DecisionList> {
    if r > family.len() {
        return Err(Error::Parameter(format!(
            "random_decision_list: {r} rules requested but the family has only {} features",
            family.len()
        )));
    }
    if alternations > r.saturating_sub(1) {
        return Err(Error::Parameter(format!(
            "random_decision_list: {alternations} alternations impossible with {r} rules"
        )));
    }
    if r == 0 {
        return DecisionList::new(vec![], source.sign() == 1);
    }

    // Partial Fisher-Yates for r distinct feature indices.
    let mut pool: Vec<usize> = (0..family.len()).collect();
    let mut chosen = Vec::with_capacity(r);
    for i in 0..r {
        let j = i + source.below(pool.len() - i)?;
        pool.swap(i, j);
        chosen.push(pool[i]);
    }

    // Exactly `alternations` sign changes: flip at a uniformly random subset
    // of that many of the r-1 gaps.
    let mut gap_pool: Vec<usize> = (0..r.saturating_sub(1)).collect();
    for i in 0..alternations {
        let j = i + source.below(gap_pool.len() - i)?;
        gap_pool.swap(i, j);
    }
    let mut flip_after = vec![false; r];
    for &g in &gap_pool[..alternations] {
        flip_after[g] = true;
    }

    let mut bit = source.sign() == 1;
    let mut terms = Vec::with_capacity(r);
    for (pos, &fid) in chosen.iter().enumerate() {
        terms.push(Term { feature: family.features()[fid].clone(), bit });
        if flip_after[pos] {
            bit = !bit;
        }
    }
    let default_bit = terms.last().expect("r >= 1").bit;
    DecisionList::new(terms, default_bit)
}

/// Draws `n` i.i.d. feature vectors from the distribution and labels them
/// with the target list.
pub fn pac_sample(
    target: &DecisionList,
    dim: usize,
    distribution: &PacDistribution,
    n: usize,
    source: &mut RandomSource,
) -> Result<PacSample> {
    if target.required_dim() > dim {
        return Err(Error::DimensionMismatch { expected: target.required_dim(), got: dim });
    }
    match distribution {
        PacDistribution::Uniform => {}
        PacDistribution::Product(p) => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Parameter(format!(
                    "pac_sample: product parameter must lie in [0, 1], got {p}"
                )));
            }
        }
        PacDistribution::Custom(weights) => {
            if dim > CUSTOM_DIST_MAX_DIM {
                return Err(Error::Parameter(format!(
                    "pac_sample: custom distributions support at most {CUSTOM_DIST_MAX_DIM} \
                     dimensions, got {dim}"
                )));
            }
            if weights.len() != 1usize << dim {
                return Err(Error::Parameter(format!(
                    "pac_sample: custom distribution needs {} weights for dimension {dim}, got {}",
                    1usize << dim,
                    weights.len()
                )));
            }
        }
    }
    let mut examples = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<bool> = match distribution {
            PacDistribution::Uniform => (0..dim).map(|_| source.sign() == 1).collect(),
            PacDistribution::Product(p) => {
                let mut row = Vec::with_capacity(dim);
                for _ in 0..dim {
                    row.push(source.bernoulli(*p)?);
                }
                row
            }
            PacDistribution::Custom(weights) => {
                let point = source.categorical(weights)?;
                (0..dim).map(|i| (point >> i) & 1 == 1).collect()
            }
        };
        let label = target.evaluate(&x)?;
        examples.push(PacExample { x, label });
    }
    PacSample::new(dim, examples)
}

/// Generates an oblivious margin-realizable stream of length `horizon`
/// labeled by the target halfspace. Every emitted example satisfies
/// `y * <v, x> >= claimed_margin - 1e-9`; if fewer than one candidate in a
/// thousand passes that filter the generator gives up with a generation
/// error rather than looping forever.
pub fn online_stream(
    target: &MarginHalfspace,
    horizon: usize,
    distribution: StreamDistribution,
    source: &mut RandomSource,
) -> Result<Vec<OnlineExample>> {
    let mut budget = 1000usize.max(horizon.saturating_mul(1000));
    let mut draw_accepted = |source: &mut RandomSource| -> Result<(Vec<i8>, f64)> {
        loop {
            if budget == 0 {
                return Err(Error::Generation(format!(
                    "online_stream: rejection rate above 99.9% against margin {}; \
                     the distribution barely intersects the margin region",
                    target.claimed_margin
                )));
            }
            budget -= 1;
            let x: Vec<i8> = (0..target.dimension).map(|_| source.sign()).collect();
            let ip = target.inner(&x)?;
            if ip.abs() >= target.claimed_margin - MARGIN_SLACK {
                return Ok((x, ip));
            }
        }
    };
    let mut stream = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let (x, ip) = match distribution {
            StreamDistribution::UniformSigns => draw_accepted(source)?,
            StreamDistribution::BoundaryHeavy => {
                let mut best = draw_accepted(source)?;
                for _ in 1..BOUNDARY_CANDIDATES {
                    let candidate = draw_accepted(source)?;
                    if candidate.1.abs() < best.1.abs() {
                        best = candidate;
                    }
                }
                best
            }
        };
        let y = sgn(ip);
        let example = OnlineExample::new(x, y)?;
        debug_assert!(
            f64::from(y) * target.inner(&example.x)? >= target.claimed_margin - MARGIN_SLACK
        );
        stream.push(example);
    }
    Ok(stream)
}

/// A `k`-sparse uniform target: weight `1/k` on the first `k` coordinates.
/// Odd `k` keeps every inner product away from zero, giving exact margin
/// `1/k` over `{-1,+1}^d`.
pub fn sparse_target(dim: usize, k: usize) -> Result<MarginHalfspace> {
    if k == 0 || k > dim {
        return Err(Error::Parameter(format!(
            "sparse_target: sparsity {k} out of range for dimension {dim}"
        )));
    }
    if k % 2 == 0 {
        return Err(Error::Parameter(format!(
            "sparse_target: sparsity must be odd to bound the margin away from zero, got {k}"
        )));
    }
    let mut weights = vec![0.0; dim];
    for w in weights.iter_mut().take(k) {
        *w = 1.0 / k as f64;
    }
    MarginHalfspace::new(weights, 1.0 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_lists_have_requested_shape() {
        let mut src = RandomSource::new(12);
        let fam = FeatureFamily::literals_with_negations(9).unwrap();
        for r in 0..=6usize {
            for alternations in 0..=r.saturating_sub(1) {
                for _ in 0..20 {
                    let list = random_decision_list(&fam, r, alternations, &mut src).unwrap();
                    assert_eq!(list.len(), r);
                    assert_eq!(list.alternations(), alternations);
                    assert_eq!(list.extended_alternations(), alternations);
                    if alternations == 0 {
                        assert!(list.terms.windows(2).all(|w| w[0].bit == w[1].bit));
                    }
                }
            }
        }
        // r = 0: a constant list.
        let constant = random_decision_list(&fam, 0, 0, &mut src).unwrap();
        assert!(constant.is_empty());
        assert!(random_decision_list(&fam, 19, 0, &mut src).is_err());
        assert!(random_decision_list(&fam, 3, 3, &mut src).is_err());
    }

    #[test]
    fn pac_sample_labels_match_target() {
        let mut src = RandomSource::new(4);
        let fam = FeatureFamily::literals(5).unwrap();
        let target = random_decision_list(&fam, 3, 1, &mut src).unwrap();
        let sample =
            pac_sample(&target, 5, &PacDistribution::Uniform, 500, &mut src).unwrap();
        assert_eq!(sample.len(), 500);
        for ex in sample.examples() {
            assert_eq!(ex.label, target.evaluate(&ex.x).unwrap());
        }
        let empty = pac_sample(&target, 5, &PacDistribution::Uniform, 0, &mut src).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn uniform_coordinates_concentrate_at_half() {
        let mut src = RandomSource::new(42);
        let target = DecisionList::new(vec![], true).unwrap();
        let sample =
            pac_sample(&target, 3, &PacDistribution::Uniform, 100_000, &mut src).unwrap();
        for i in 0..3 {
            let mean = sample.examples().iter().filter(|ex| ex.x[i]).count() as f64 / 1e5;
            assert!((mean - 0.5).abs() < 0.01, "coordinate {i} mean {mean}");
        }
    }

    #[test]
    fn product_and_custom_distributions() {
        let mut src = RandomSource::new(43);
        let target = DecisionList::new(vec![], false).unwrap();
        let sample =
            pac_sample(&target, 4, &PacDistribution::Product(0.8), 50_000, &mut src).unwrap();
        for i in 0..4 {
            let mean = sample.examples().iter().filter(|ex| ex.x[i]).count() as f64 / 5e4;
            assert!((mean - 0.8).abs() < 0.02, "coordinate {i} mean {mean}");
        }

        let weights = vec![0.1, 0.2, 0.3, 0.4];
        let sample =
            pac_sample(&target, 2, &PacDistribution::Custom(weights.clone()), 100_000, &mut src)
                .unwrap();
        for (point, &w) in weights.iter().enumerate() {
            let freq = sample
                .examples()
                .iter()
                .filter(|ex| {
                    let idx = usize::from(ex.x[0]) | (usize::from(ex.x[1]) << 1);
                    idx == point
                })
                .count() as f64
                / 1e5;
            assert!((freq - w).abs() < 0.01, "cell {point}: {freq} vs {w}");
        }

        assert!(pac_sample(&target, 2, &PacDistribution::Custom(vec![1.0; 3]), 1, &mut src)
            .is_err());
        assert!(pac_sample(&target, 2, &PacDistribution::Product(1.5), 1, &mut src).is_err());
    }

    #[test]
    fn online_stream_respects_margin_and_labels() {
        let mut src = RandomSource::new(9);
        let target = sparse_target(6, 3).unwrap();
        let stream =
            online_stream(&target, 400, StreamDistribution::UniformSigns, &mut src).unwrap();
        assert_eq!(stream.len(), 400);
        for ex in &stream {
            let ip = target.inner(&ex.x).unwrap();
            assert!(f64::from(ex.y) * ip >= target.claimed_margin - 1e-9);
        }
        assert!(online_stream(&target, 0, StreamDistribution::UniformSigns, &mut src)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_literal_target_balances_labels() {
        let mut src = RandomSource::new(10);
        let target = sparse_target(8, 1).unwrap();
        let stream =
            online_stream(&target, 2000, StreamDistribution::UniformSigns, &mut src).unwrap();
        let positives = stream.iter().filter(|ex| ex.y == 1).count() as f64 / 2000.0;
        assert!((positives - 0.5).abs() < 0.05, "label balance {positives}");
    }

    #[test]
    fn boundary_heavy_mode_concentrates_near_the_margin() {
        let mut src = RandomSource::new(11);
        let target = sparse_target(9, 9).unwrap();
        let uniform =
            online_stream(&target, 300, StreamDistribution::UniformSigns, &mut src).unwrap();
        let heavy =
            online_stream(&target, 300, StreamDistribution::BoundaryHeavy, &mut src).unwrap();
        let mean_abs = |s: &[OnlineExample]| {
            s.iter()
                .map(|ex| target.inner(&ex.x).unwrap().abs())
                .sum::<f64>()
                / s.len() as f64
        };
        for ex in &heavy {
            assert!(target.inner(&ex.x).unwrap().abs() >= target.claimed_margin - 1e-9);
        }
        assert!(
            mean_abs(&heavy) < mean_abs(&uniform),
            "boundary-heavy {} not below uniform {}",
            mean_abs(&heavy),
            mean_abs(&uniform)
        );
    }

    #[test]
    fn hopeless_margin_requirement_errors_out() {
        // A uniform 12-sparse target reaches |<v, x>| = 1 only on the two
        // all-equal sign patterns: acceptance rate 2^-11, under the 1/1000
        // budget floor.
        let weights = vec![1.0 / 12.0; 12];
        let target = MarginHalfspace::new(weights, 1.0).unwrap();
        let mut src = RandomSource::new(13);
        let got = online_stream(&target, 50, StreamDistribution::UniformSigns, &mut src);
        assert!(matches!(got, Err(Error::Generation(_))));
    }

    #[test]
    fn sparse_target_margin_is_exact() {
        let target = sparse_target(5, 3).unwrap();
        let mut min_ip = f64::INFINITY;
        for point in 0u32..(1 << 5) {
            let x: Vec<i8> = (0..5)
                .map(|i| if (point >> i) & 1 == 1 { 1i8 } else { -1 })
                .collect();
            min_ip = min_ip.min(target.inner(&x).unwrap().abs());
        }
        assert!((min_ip - 1.0 / 3.0).abs() < 1e-12);
        assert!(sparse_target(5, 2).is_err());
        assert!(sparse_target(5, 0).is_err());
        assert!(sparse_target(5, 7).is_err());
    }
}
