//! Structure-preserving encodings between hypothesis classes.
//!
//! * [`dl_to_halfspace`]: a monotone 1-decision list with `r` rules and `D`
//!   alternations becomes a margin halfspace over `d + 1` coordinates (the
//!   last one a constant `+1` bias). Rules are grouped into maximal same-bit
//!   blocks `B_1 .. B_{D+1}`; a rule in block `i` carries signed magnitude
//!   `(r+1)^(D+2-i)` and the default bit carries `±1`. The magnitudes act on
//!   rule *firing indicators*: the first firing rule strictly dominates
//!   everything behind it (at most `r` later rules of magnitude at most
//!   `(r+1)^(D+1-i)` plus the default), so the halfspace sign equals the list
//!   label on every input and the unnormalized margin is at least 1.
//!   Indicators fold into `{-1,+1}` coordinates by `1{x_j} = (x_j + 1)/2`:
//!   half of each rule weight moves onto the variable's coordinate and the
//!   other half onto the bias. The claimed margin is the conservative
//!   `1 / l1-norm(unnormalized weights)`, at least `1 / (r+1)^(D+2)`.
//! * [`double_nonneg`] / [`embed_pm`]: split signed weights over `d`
//!   coordinates into nonnegative weights over `2d` coordinates, mirroring
//!   examples as `z = (x, -x)`; inner products are preserved exactly.
//! * [`PointFunctionEmbedding`]: domain points `x` of `[T]` map to the
//!   all-ones vector with `-1` at coordinate `x`; against the basis target
//!   `e_t` this computes the *negation* of the point function `p_t` with
//!   margin 1 (the flag on the struct records the negation).

use serde::{Deserialize, Serialize};

use crate::decision_lists::{DecisionList, FeatureKind};
use crate::error::{Error, Result};
use crate::winnow::sgn;

/// Maps a PAC bit to the `{-1, +1}` convention: `1 -> +1`, `0 -> -1`.
pub fn bit_to_sign(bit: bool) -> i8 {
    if bit {
        1
    } else {
        -1
    }
}

/// Maps a PAC feature vector to `{-1, +1}` coordinates.
pub fn bits_to_pm(bits: &[bool]) -> Vec<i8> {
    bits.iter().map(|&b| bit_to_sign(b)).collect()
}

/// A halfspace `x -> sgn(<v, x>)` with unit l1 weights and a margin claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginHalfspace {
    pub weights: Vec<f64>,
    pub claimed_margin: f64,
    pub dimension: usize,
}

impl MarginHalfspace {
    /// Builds a halfspace, checking the unit l1 norm (to 1e-9), a positive
    /// margin claim, and the dimension.
    pub fn new(weights: Vec<f64>, claimed_margin: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Parameter("halfspace: weights must be nonempty".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Parameter("halfspace: weights must be finite".into()));
        }
        let norm: f64 = weights.iter().map(|w| w.abs()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "halfspace: weights must have unit l1 norm, got {norm}"
            )));
        }
        if !(claimed_margin > 0.0) || !claimed_margin.is_finite() {
            return Err(Error::Parameter(format!(
                "halfspace: claimed margin must be a positive finite real, got {claimed_margin}"
            )));
        }
        let dimension = weights.len();
        Ok(Self { weights, claimed_margin, dimension })
    }

    /// `<v, x>` for `x in {-1, +1}^dimension`.
    pub fn inner(&self, x: &[i8]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: x.len() });
        }
        Ok(self
            .weights
            .iter()
            .zip(x)
            .map(|(&w, &xi)| w * f64::from(xi))
            .sum())
    }

    /// `sgn(<v, x>)` with `sgn(0) = +1`.
    pub fn predict(&self, x: &[i8]) -> Result<i8> {
        Ok(sgn(self.inner(x)?))
    }

    /// `|<v, x>|`, the achieved margin at `x`.
    pub fn margin_at(&self, x: &[i8]) -> Result<f64> {
        Ok(self.inner(x)?.abs())
    }
}

/// Converts a monotone 1-decision list over `dim` variables into a
/// [`MarginHalfspace`] over `dim + 1` coordinates; the final coordinate is a
/// constant-`+1` bias the caller appends to each `{-1, +1}` example (see
/// [`bits_to_pm`] for the bit convention and the module docs for the
/// construction). Rejects lists containing anything but plain literals.
pub fn dl_to_halfspace(list: &DecisionList, dim: usize) -> Result<MarginHalfspace> {
    for term in &list.terms {
        match term.feature.kind {
            FeatureKind::Literal(_) => {}
            _ => {
                return Err(Error::Parameter(format!(
                    "dl_to_halfspace: feature {:?} is not a plain literal; encode negations \
                     with double_nonneg on the inputs first",
                    term.feature.kind
                )))
            }
        }
    }
    if list.required_dim() > dim {
        return Err(Error::DimensionMismatch { expected: list.required_dim(), got: dim });
    }

    let r = list.len() as f64;
    let alternations = list.alternations(); // D: blocks are B_1 .. B_{D+1}
    let base = r + 1.0;
    let mut folded = vec![0.0f64; dim + 1];
    let mut block = 1usize;
    for (j, term) in list.terms.iter().enumerate() {
        if j > 0 && term.bit != list.terms[j - 1].bit {
            block += 1;
        }
        let magnitude = base.powi((alternations + 2 - block) as i32);
        let signed = f64::from(bit_to_sign(term.bit)) * magnitude;
        let var = match term.feature.kind {
            FeatureKind::Literal(i) => i,
            _ => unreachable!("validated above"),
        };
        // Indicator fold: u * (x+1)/2 = (u/2) x + u/2.
        folded[var] += signed / 2.0;
        folded[dim] += signed / 2.0;
    }
    folded[dim] += f64::from(bit_to_sign(list.default_bit));

    let norm: f64 = folded.iter().map(|w| w.abs()).sum();
    let weights = folded.iter().map(|w| w / norm).collect();
    MarginHalfspace::new(weights, 1.0 / norm)
}

/// Splits signed weights into nonnegative ones over doubled coordinates:
/// positive mass stays at `i`, negative mass moves to `i + d`.
pub fn double_nonneg(w: &[f64]) -> Vec<f64> {
    let d = w.len();
    let mut out = vec![0.0; 2 * d];
    for (i, &wi) in w.iter().enumerate() {
        if wi >= 0.0 {
            out[i] = wi;
        } else {
            out[i + d] = -wi;
        }
    }
    out
}

/// Mirrors an example for the doubled coordinates: `z = (x, -x)`, so that
/// `<double_nonneg(w), z> = <w, x>` exactly.
pub fn embed_pm(x: &[i8]) -> Vec<i8> {
    let mut z = Vec::with_capacity(2 * x.len());
    z.extend_from_slice(x);
    z.extend(x.iter().map(|&v| -v));
    z
}

/// [`double_nonneg`] lifted to a whole halfspace: the weights double in
/// length and become nonnegative, the norm and every inner product against
/// mirrored examples are unchanged, so the margin claim carries over.
pub fn double_nonneg_halfspace(h: &MarginHalfspace) -> Result<MarginHalfspace> {
    MarginHalfspace::new(double_nonneg(&h.weights), h.claimed_margin)
}

/// The point-function embedding: domain `[T]` into `{-1, +1}^T` against a
/// standard-basis target.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFunctionEmbedding {
    pub target: MarginHalfspace,
    /// The distinguished point `t` (1-based).
    pub index: usize,
    /// Domain size `T`.
    pub domain: usize,
    /// The halfspace computes `sgn<e_t, embed(x)> = -1` exactly at `x = t`,
    /// i.e. the *negation* of the point function `p_t`; always `true`,
    /// recorded so consumers interpret labels correctly.
    pub negates_point_function: bool,
}

impl PointFunctionEmbedding {
    pub fn new(t: usize, domain: usize) -> Result<Self> {
        if domain == 0 || t == 0 || t > domain {
            return Err(Error::Parameter(format!(
                "point function: index {t} out of range for domain size {domain}"
            )));
        }
        let mut weights = vec![0.0; domain];
        weights[t - 1] = 1.0;
        Ok(Self {
            target: MarginHalfspace::new(weights, 1.0)?,
            index: t,
            domain,
            negates_point_function: true,
        })
    }

    /// Embeds `x in [T]` as the all-ones vector with `-1` at coordinate `x`.
    pub fn embed(&self, x: usize) -> Result<Vec<i8>> {
        if x == 0 || x > self.domain {
            return Err(Error::Parameter(format!(
                "point function: point {x} out of range for domain size {}",
                self.domain
            )));
        }
        let mut z = vec![1i8; self.domain];
        z[x - 1] = -1;
        Ok(z)
    }

    /// The halfspace's label on `x`: `-1` iff `x = t`.
    pub fn halfspace_label(&self, x: usize) -> Result<i8> {
        self.target.predict(&self.embed(x)?)
    }

    /// The point function itself: `p_t(x) = 1 <=> x = t`.
    pub fn point_value(&self, x: usize) -> bool {
        x == self.index
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision_lists::{Feature, Term};
    use crate::randomness::RandomSource;

    fn monotone_list(rules: &[(usize, bool)], default_bit: bool) -> DecisionList {
        let terms = rules
            .iter()
            .enumerate()
            .map(|(id, &(var, bit))| Term {
                feature: Feature { id, kind: FeatureKind::Literal(var) },
                bit,
            })
            .collect();
        DecisionList::new(terms, default_bit).unwrap()
    }

    /// Brute-force check over all of {0,1}^dim: exact label agreement and the
    /// measured margin of the halfspace.
    fn verify_reduction(list: &DecisionList, dim: usize) -> (f64, MarginHalfspace) {
        let h = dl_to_halfspace(list, dim).unwrap();
        let mut min_margin = f64::INFINITY;
        for point in 0u32..(1 << dim) {
            let bits: Vec<bool> = (0..dim).map(|i| (point >> i) & 1 == 1).collect();
            let mut z = bits_to_pm(&bits);
            z.push(1);
            let expected = bit_to_sign(list.evaluate(&bits).unwrap());
            assert_eq!(
                h.predict(&z).unwrap(),
                expected,
                "disagreement on input {bits:?}"
            );
            min_margin = min_margin.min(h.margin_at(&z).unwrap());
        }
        (min_margin, h)
    }

    #[test]
    fn single_term_list_brute_force() {
        let list = monotone_list(&[(0, true)], false);
        let (measured, h) = verify_reduction(&list, 2);
        assert_eq!(h.dimension, 3);
        assert!((h.weights.iter().map(|w| w.abs()).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(measured >= 1.0 / 6.0);
        assert!(measured >= h.claimed_margin - 1e-12);
    }

    #[test]
    fn constant_list_is_the_bias_vector() {
        let list = DecisionList::new(vec![], true).unwrap();
        let h = dl_to_halfspace(&list, 3).unwrap();
        assert_eq!(h.weights, vec![0.0, 0.0, 0.0, 1.0]);
        assert!((h.claimed_margin - 1.0).abs() < 1e-15);
        let (measured, _) = verify_reduction(&list, 3);
        assert!((measured - 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_bit_block_with_many_terms() {
        // Three monotone rules all answering +1 with default -1: any true
        // variable must flip the sign even when the others are false.
        let list = monotone_list(&[(0, true), (1, true), (2, true)], false);
        let (measured, h) = verify_reduction(&list, 3);
        let bound = 1.0 / (2.0 * 4.0f64.powi(2)); // 1 / (2 (r+1)^(D+2))
        assert!(measured >= bound, "measured {measured} below {bound}");
        assert!(measured >= h.claimed_margin - 1e-12);
    }

    #[test]
    fn random_lists_agree_everywhere_with_margin() {
        let mut src = RandomSource::new(2101);
        for trial in 0..60 {
            let d = 4 + (trial % 7); // up to 10
            let fam = crate::decision_lists::FeatureFamily::literals(d).unwrap();
            let r = 1 + trial % d.min(6); // never more rules than features
            let max_alt = (r - 1).min(2);
            let alt = if max_alt == 0 { 0 } else { trial % (max_alt + 1) };
            let list = crate::streams::random_decision_list(&fam, r, alt, &mut src).unwrap();
            assert_eq!(list.alternations(), alt);
            let (measured, h) = verify_reduction(&list, d);
            let bound = 1.0 / (2.0 * ((r + 1) as f64).powi(alt as i32 + 2));
            assert!(
                measured >= bound,
                "trial {trial}: measured {measured} below {bound} (r={r}, D={alt})"
            );
            assert!(measured >= h.claimed_margin - 1e-12);
        }
    }

    #[test]
    fn non_monotone_features_are_rejected() {
        let list = DecisionList::new(
            vec![Term {
                feature: Feature { id: 0, kind: FeatureKind::NegatedLiteral(1) },
                bit: true,
            }],
            false,
        )
        .unwrap();
        assert!(matches!(dl_to_halfspace(&list, 2), Err(Error::Parameter(_))));
        let too_small = monotone_list(&[(5, true)], false);
        assert!(dl_to_halfspace(&too_small, 2).is_err());
    }

    #[test]
    fn doubling_example() {
        let w = [0.5, -0.5];
        let x = [1i8, -1];
        let wp = double_nonneg(&w);
        let z = embed_pm(&x);
        assert_eq!(wp, vec![0.5, 0.0, 0.0, 0.5]);
        assert_eq!(z, vec![1, -1, -1, 1]);
        let before: f64 = w.iter().zip(&x).map(|(&wi, &xi)| wi * f64::from(xi)).sum();
        let after: f64 = wp.iter().zip(&z).map(|(&wi, &zi)| wi * f64::from(zi)).sum();
        assert_eq!(before, 1.0);
        assert_eq!(after, 1.0);
        // All-nonnegative weights stay in the first half.
        assert_eq!(double_nonneg(&[0.25, 0.75]), vec![0.25, 0.75, 0.0, 0.0]);
    }

    #[test]
    fn doubling_preserves_inner_products() {
        let mut src = RandomSource::new(77);
        for _ in 0..2000 {
            let d = 1 + src.below(12).unwrap();
            let w: Vec<f64> = (0..d).map(|_| src.uniform() * 2.0 - 1.0).collect();
            let x: Vec<i8> = (0..d).map(|_| src.sign()).collect();
            let wp = double_nonneg(&w);
            assert!(wp.iter().all(|&v| v >= 0.0));
            let z = embed_pm(&x);
            let before: f64 = w.iter().zip(&x).map(|(&wi, &xi)| wi * f64::from(xi)).sum();
            let after: f64 = wp.iter().zip(&z).map(|(&wi, &zi)| wi * f64::from(zi)).sum();
            assert!((before - after).abs() <= 1e-12);
            let norm_before: f64 = w.iter().map(|v| v.abs()).sum();
            let norm_after: f64 = wp.iter().sum();
            assert!((norm_before - norm_after).abs() <= 1e-12);
        }
    }

    #[test]
    fn doubled_halfspace_keeps_margin() {
        let list = monotone_list(&[(0, true), (1, false)], true);
        let h = dl_to_halfspace(&list, 2).unwrap();
        let doubled = double_nonneg_halfspace(&h).unwrap();
        assert_eq!(doubled.dimension, 2 * h.dimension);
        assert!(doubled.weights.iter().all(|&w| w >= 0.0));
        assert_eq!(doubled.claimed_margin, h.claimed_margin);
        for point in 0u32..(1 << h.dimension) {
            let x: Vec<i8> = (0..h.dimension)
                .map(|i| if (point >> i) & 1 == 1 { 1i8 } else { -1 })
                .collect();
            let z = embed_pm(&x);
            assert!((h.inner(&x).unwrap() - doubled.inner(&z).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn point_function_embedding() {
        let pf = PointFunctionEmbedding::new(3, 5).unwrap();
        assert!(pf.negates_point_function);
        assert_eq!(pf.target.inner(&pf.embed(3).unwrap()).unwrap(), -1.0);
        assert_eq!(pf.target.inner(&pf.embed(2).unwrap()).unwrap(), 1.0);
        assert_eq!(pf.halfspace_label(3).unwrap(), -1);
        assert_eq!(pf.halfspace_label(2).unwrap(), 1);
        assert!(pf.point_value(3));
        assert!(!pf.point_value(4));
        for x in 1..=5 {
            assert_eq!(pf.target.margin_at(&pf.embed(x).unwrap()).unwrap(), 1.0);
        }
        // Distinct embeddings differ in exactly two coordinates.
        let a = pf.embed(1).unwrap();
        let b = pf.embed(4).unwrap();
        let diff = a.iter().zip(&b).filter(|(u, v)| u != v).count();
        assert_eq!(diff, 2);
        assert!(PointFunctionEmbedding::new(0, 5).is_err());
        assert!(PointFunctionEmbedding::new(6, 5).is_err());
        assert!(pf.embed(6).is_err());
    }
}
