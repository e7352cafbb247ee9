//! Empirical verification machinery: privacy ratio tests on neighboring
//! inputs, Monte Carlo checks of high-probability bounds, and a brute-force
//! empirical-risk-minimization oracle.
//!
//! The audits are statistical smoke tests, not proofs, and they are honest
//! about power: a report never says *pass* when the trials cannot certify
//! the claim — that outcome is the distinct *inconclusive* verdict.
//!
//! [`neighbor_ratio_test`] runs a mechanism many times on two neighboring
//! inputs, coarsens each output to a discrete key, and checks the
//! differential-privacy inequality `P_A(cell) <= e^eps * P_B(cell) + delta`
//! per realized cell in both directions, widening each side by a Wilson
//! confidence interval. A *certified* violation (interval-separated) fails
//! the test; cells whose intervals are too wide to certify the inequality
//! make it inconclusive.

use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decision_lists::{
    empirical_error, DecisionList, FeatureFamily, PacSample, Term,
};
use crate::error::{Error, Result};
use crate::randomness::RandomSource;

/// Outcome of a statistical audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// One coarsened output cell of a ratio test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellReport {
    pub key: String,
    pub count_a: u64,
    pub count_b: u64,
    pub p_a: f64,
    pub p_b: f64,
}

/// Result of [`neighbor_ratio_test`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioReport {
    pub verdict: Verdict,
    /// Max over realized cells and both directions of
    /// `(p_hat_numerator - delta) / p_hat_denominator` (infinite if some
    /// numerator mass faces an empty denominator cell).
    pub statistic: f64,
    /// The certified bound `e^epsilon`.
    pub bound: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Normal z-width of the Wilson confidence intervals.
    pub ci: f64,
    /// Trials per input (the test runs `2 * trials` mechanism executions).
    pub trials: u64,
    pub seed: u64,
    /// Cells whose intervals could not certify the inequality.
    pub uncertified_cells: u64,
    /// Cells with an interval-separated violation.
    pub violating_cells: u64,
    pub cells: Vec<CellReport>,
}

/// Wilson score interval for `successes` of `trials` at width `z`.
fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Runs `runner` `trials` times on each of two neighboring inputs (selected
/// by the boolean: `false` for input A, `true` for input B), tallies the
/// coarsened outputs, and audits the `(epsilon, delta)` inequality per
/// realized cell in both directions with Wilson slack at width `z` (2.576
/// covers each side at 99.5%). Trials run in parallel over split sources, so
/// the tally — and hence the report — is independent of thread count.
pub fn neighbor_ratio_test<K, F>(
    runner: F,
    epsilon: f64,
    delta: f64,
    trials: u64,
    z: f64,
    seed: u64,
) -> Result<RatioReport>
where
    K: Eq + Hash + Ord + Clone + Send + Display,
    F: Fn(bool, &mut RandomSource) -> Result<K> + Sync,
{
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!(
            "ratio test: epsilon must be a nonnegative finite real, got {epsilon}"
        )));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Parameter(format!(
            "ratio test: delta must lie in [0, 1), got {delta}"
        )));
    }
    if trials == 0 {
        return Err(Error::Parameter("ratio test: need at least one trial".into()));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Parameter(format!(
            "ratio test: z must be a positive finite real, got {z}"
        )));
    }
    let base = RandomSource::new(seed);

    let tally = |label: &'static str, use_b: bool| -> Result<HashMap<K, u64>> {
        (0..trials)
            .into_par_iter()
            .try_fold(HashMap::new, |mut map: HashMap<K, u64>, i| {
                let mut source = base.split_index(label, i);
                let key = runner(use_b, &mut source)?;
                *map.entry(key).or_insert(0) += 1;
                Ok(map)
            })
            .try_reduce(HashMap::new, |mut left, right| {
                for (k, v) in right {
                    *left.entry(k).or_insert(0) += v;
                }
                Ok(left)
            })
    };
    let counts_a = tally("ratio-test-a", false)?;
    let counts_b = tally("ratio-test-b", true)?;

    let mut keys: Vec<K> = counts_a.keys().chain(counts_b.keys()).cloned().collect();
    keys.sort();
    keys.dedup();

    let n = trials as f64;
    let bound = epsilon.exp();
    let mut statistic = f64::NEG_INFINITY;
    let mut uncertified = 0u64;
    let mut violating = 0u64;
    let mut cells = Vec::with_capacity(keys.len());
    for key in &keys {
        let ca = *counts_a.get(key).unwrap_or(&0);
        let cb = *counts_b.get(key).unwrap_or(&0);
        let (pa, pb) = (ca as f64 / n, cb as f64 / n);
        let (lo_a, hi_a) = wilson(ca, trials, z);
        let (lo_b, hi_b) = wilson(cb, trials, z);
        for ((p_num, lo_num, hi_num), (p_den, lo_den, hi_den)) in
            [((pa, lo_a, hi_a), (pb, lo_b, hi_b)), ((pb, lo_b, hi_b), (pa, lo_a, hi_a))]
        {
            let excess = p_num - delta;
            if excess > 0.0 {
                statistic = statistic.max(if p_den > 0.0 {
                    excess / p_den
                } else {
                    f64::INFINITY
                });
            }
            if lo_num - delta > bound * hi_den {
                violating += 1;
            } else if hi_num - delta > bound * lo_den {
                uncertified += 1;
            }
        }
        cells.push(CellReport { key: key.to_string(), count_a: ca, count_b: cb, p_a: pa, p_b: pb });
    }
    if statistic == f64::NEG_INFINITY {
        statistic = 0.0;
    }
    let verdict = if violating > 0 {
        Verdict::Fail
    } else if uncertified > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(RatioReport {
        verdict,
        statistic,
        bound,
        epsilon,
        delta,
        ci: z,
        trials,
        seed,
        uncertified_cells: uncertified,
        violating_cells: violating,
        cells,
    })
}

/// Result of [`bound_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub descriptor: String,
    pub verdict: Verdict,
    pub violations: u64,
    pub trials: u64,
    /// The bound's stated failure probability (0 for worst-case bounds).
    pub allowed_rate: f64,
    /// Observed violation rate.
    pub statistic: f64,
    /// `allowed_rate` plus the one-sided binomial slack at width `ci`.
    pub bound: f64,
    /// Normal z-width of the binomial confidence interval.
    pub ci: f64,
    pub seed: u64,
}

/// Runs `trials` seeded experiments (in parallel over split sources) where
/// `trial_fn` returns whether the audited bound was *violated*, and compares
/// the violation frequency against `allowed_rate` with one-sided binomial
/// slack at width `z`. A worst-case bound (`allowed_rate = 0`) passes only
/// with zero violations; probabilistic bounds are inconclusive — never pass
/// — when `trials * allowed_rate < 5` (too little power to see the failure
/// rate at all).
pub fn bound_check<F>(
    descriptor: &str,
    allowed_rate: f64,
    trials: u64,
    z: f64,
    seed: u64,
    trial_fn: F,
) -> Result<BoundReport>
where
    F: Fn(u64, &mut RandomSource) -> Result<bool> + Sync,
{
    if !(0.0..1.0).contains(&allowed_rate) {
        return Err(Error::Parameter(format!(
            "bound check: allowed rate must lie in [0, 1), got {allowed_rate}"
        )));
    }
    if trials == 0 {
        return Err(Error::Parameter("bound check: need at least one trial".into()));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Parameter(format!(
            "bound check: z must be a positive finite real, got {z}"
        )));
    }
    let base = RandomSource::new(seed);
    let violations = (0..trials)
        .into_par_iter()
        .try_fold(
            || 0u64,
            |acc, i| -> Result<u64> {
                let mut source = base.split_index("bound-check", i);
                Ok(acc + u64::from(trial_fn(i, &mut source)?))
            },
        )
        .try_reduce(|| 0u64, |a, b| Ok(a + b))?;

    let n = trials as f64;
    let observed_rate = violations as f64 / n;
    let threshold_rate =
        allowed_rate + z * (allowed_rate * (1.0 - allowed_rate) / n).sqrt();
    let verdict = if allowed_rate == 0.0 {
        if violations == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else if observed_rate > threshold_rate {
        Verdict::Fail
    } else if n * allowed_rate < 5.0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(BoundReport {
        descriptor: descriptor.to_string(),
        verdict,
        violations,
        trials,
        allowed_rate,
        statistic: observed_rate,
        bound: threshold_rate,
        ci: z,
        seed,
    })
}

/// Hard cap on the number of candidate lists the exhaustive searcher will
/// enumerate.
pub const ERM_SEARCH_CAP: u128 = 10_000_000;

/// Number of decision lists over `family_size` features with length at most
/// `max_length`: ordered distinct features, a bit each, and a default.
pub fn erm_search_space(family_size: usize, max_length: usize) -> u128 {
    let mut total: u128 = 0;
    for len in 0..=max_length.min(family_size) {
        let mut ordered: u128 = 1;
        for i in 0..len {
            ordered = ordered.saturating_mul((family_size - i) as u128);
        }
        total = total
            .saturating_add(ordered.saturating_mul(1u128 << len).saturating_mul(2));
    }
    total
}

/// Exhaustive empirical risk minimization over decision lists of length at
/// most `max_length` drawn from the family. Deterministic tie-break: among
/// minimizers, the first in enumeration order (shorter lists first, then
/// features ascending by identifier position by position, bit 0 before
/// bit 1, default 0 before 1). Refuses search spaces above
/// [`ERM_SEARCH_CAP`].
pub fn brute_force_erm(
    sample: &PacSample,
    family: &FeatureFamily,
    max_length: usize,
) -> Result<(DecisionList, usize)> {
    if family.dim() != sample.dim() && !sample.is_empty() {
        return Err(Error::DimensionMismatch { expected: family.dim(), got: sample.dim() });
    }
    let space = erm_search_space(family.len(), max_length);
    if space > ERM_SEARCH_CAP {
        return Err(Error::SearchSpaceTooLarge(format!(
            "brute_force_erm: {space} candidate lists exceed the cap of {ERM_SEARCH_CAP} \
             (family of {}, max length {max_length})",
            family.len()
        )));
    }

    struct Search<'a> {
        sample: &'a PacSample,
        family: &'a FeatureFamily,
        best_error: usize,
        best: Option<DecisionList>,
    }

    impl Search<'_> {
        /// `active` holds the uncovered example indices; `errors` counts the
        /// examples already covered by a wrong-bit rule.
        fn visit(
            &mut self,
            prefix: &mut Vec<(usize, bool)>,
            used: &mut Vec<bool>,
            active: &[usize],
            errors: usize,
            remaining_depth: usize,
        ) {
            // Close the list with the better default (ties: default 0 first).
            let active_true =
                active.iter().filter(|&&i| self.sample.examples()[i].label).count();
            let active_false = active.len() - active_true;
            for default_bit in [false, true] {
                let total = errors + if default_bit { active_false } else { active_true };
                if total < self.best_error {
                    self.best_error = total;
                    let terms = prefix
                        .iter()
                        .map(|&(fid, bit)| Term {
                            feature: self.family.features()[fid].clone(),
                            bit,
                        })
                        .collect();
                    self.best = Some(DecisionList { terms, default_bit });
                }
            }
            if remaining_depth == 0 || errors >= self.best_error {
                return;
            }
            for fid in 0..self.family.len() {
                if used[fid] {
                    continue;
                }
                let feature = &self.family.features()[fid];
                let mut covered_true = 0usize;
                let mut covered_false = 0usize;
                let mut rest = Vec::with_capacity(active.len());
                for &i in active {
                    let ex = &self.sample.examples()[i];
                    if feature.evaluate(&ex.x) {
                        if ex.label {
                            covered_true += 1;
                        } else {
                            covered_false += 1;
                        }
                    } else {
                        rest.push(i);
                    }
                }
                used[fid] = true;
                for bit in [false, true] {
                    let wrong = if bit { covered_false } else { covered_true };
                    prefix.push((fid, bit));
                    self.visit(prefix, used, &rest, errors + wrong, remaining_depth - 1);
                    prefix.pop();
                }
                used[fid] = false;
            }
        }
    }

    let mut search = Search { sample, family, best_error: usize::MAX, best: None };
    let active: Vec<usize> = (0..sample.len()).collect();
    let mut used = vec![false; family.len()];
    search.visit(&mut Vec::new(), &mut used, &active, 0, max_length);
    let list = search.best.expect("the empty list is always visited");
    debug_assert_eq!(empirical_error(&list, sample).unwrap(), search.best_error);
    Ok((list, search.best_error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision_lists::{rivest_greedy, PacExample};
    use crate::mechanisms::{em_select, NoiseMode};
    use crate::streams::{pac_sample, random_decision_list, PacDistribution};

    #[test]
    fn wilson_interval_sanity() {
        let (lo, hi) = wilson(50, 100, 2.0);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(lo > 0.38 && hi < 0.62);
        let (lo, hi) = wilson(0, 100, 2.0);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.06);
        let (lo, hi) = wilson(100, 100, 2.0);
        assert!(lo > 0.94);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn identical_inputs_pass_with_statistic_near_one() {
        let scores = [0.0, 0.0];
        let report = neighbor_ratio_test(
            |_, source| em_select(&scores, 1.0, source, NoiseMode::Standard),
            1.0,
            0.0,
            20_000,
            2.576,
            71,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!((report.statistic - 1.0).abs() < 0.1, "statistic {}", report.statistic);
        assert_eq!(report.cells.len(), 2);
    }

    #[test]
    fn exponential_mechanism_neighbors_pass() {
        // Neighboring scores differ by 1 in candidate 1 (sensitivity-1
        // quality on neighboring samples); the certified bound is e^1.
        let a = [0.0, -1.0, -2.0, -3.0];
        let b = [0.0, -2.0, -2.0, -3.0];
        let report = neighbor_ratio_test(
            |use_b, source| {
                em_select(if use_b { &b } else { &a }, 1.0, source, NoiseMode::Standard)
            },
            1.0,
            0.0,
            200_000,
            2.576,
            72,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        // True max ratio is e^{1/2}; the statistic must stay below the bound.
        assert!(report.statistic < report.bound);
    }

    #[test]
    fn noiseless_mechanism_fails() {
        let a = [0.0, 0.5];
        let b = [0.0, -0.5];
        let report = neighbor_ratio_test(
            |use_b, source| {
                em_select(if use_b { &b } else { &a }, 1.0, source, NoiseMode::ZeroNoise)
            },
            1.0,
            0.0,
            2_000,
            2.576,
            73,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.statistic.is_infinite());
        assert!(report.violating_cells > 0);
    }

    #[test]
    fn small_trial_counts_never_pass() {
        let scores = [0.0, -1.0, -2.0, -3.0];
        let report = neighbor_ratio_test(
            |_, source| em_select(&scores, 1.0, source, NoiseMode::Standard),
            1.0,
            0.0,
            30,
            2.576,
            74,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report.uncertified_cells > 0);
    }

    #[test]
    fn delta_excuses_rare_disagreement() {
        // A fires cell 1 with probability 0.005, B never: certifiable only
        // because delta = 0.02 absorbs the gap.
        let report = neighbor_ratio_test(
            |use_b, source| {
                if !use_b && source.uniform() < 0.005 {
                    Ok(1u8)
                } else {
                    Ok(0u8)
                }
            },
            0.5,
            0.02,
            50_000,
            2.576,
            75,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn bound_check_worst_case_and_probabilistic() {
        let always_holds =
            bound_check("always", 0.0, 500, 2.576, 7, |_, _| Ok(false)).unwrap();
        assert_eq!(always_holds.verdict, Verdict::Pass);
        assert_eq!(always_holds.violations, 0);

        let broken = bound_check("broken", 0.0, 500, 2.576, 8, |i, _| Ok(i == 17)).unwrap();
        assert_eq!(broken.verdict, Verdict::Fail);
        assert_eq!(broken.violations, 1);

        let fair = bound_check("fair-coin", 0.5, 2_000, 2.576, 9, |_, source| {
            source.bernoulli(0.5)
        })
        .unwrap();
        assert_eq!(fair.verdict, Verdict::Pass);
        assert!((fair.statistic - 0.5).abs() < 0.05);

        let underpowered =
            bound_check("underpowered", 1e-6, 100, 2.576, 10, |_, _| Ok(false)).unwrap();
        assert_eq!(underpowered.verdict, Verdict::Inconclusive);

        let overshoot = bound_check("overshoot", 0.01, 10_000, 2.576, 11, |_, source| {
            source.bernoulli(0.05)
        })
        .unwrap();
        assert_eq!(overshoot.verdict, Verdict::Fail);
    }

    #[test]
    fn erm_search_space_formula() {
        // 2 features, length <= 1: 2 defaults + 2*2*2 single-rule lists = 10.
        assert_eq!(erm_search_space(2, 1), 10);
        // 3 features, length <= 2: 2 + 3*2*2 + 3*2*4*2 = 62.
        assert_eq!(erm_search_space(3, 2), 62);
        assert!(erm_search_space(145, 4) > ERM_SEARCH_CAP);
    }

    #[test]
    fn erm_reaches_zero_on_realizable_samples() {
        let mut src = RandomSource::new(31);
        let fam = FeatureFamily::literals_with_negations(4).unwrap();
        for trial in 0..10 {
            let target = random_decision_list(&fam, 2, trial % 2, &mut src).unwrap();
            let sample =
                pac_sample(&target, 4, &PacDistribution::Uniform, 40, &mut src).unwrap();
            let (list, err) = brute_force_erm(&sample, &fam, 2).unwrap();
            assert_eq!(err, 0, "trial {trial}");
            assert_eq!(empirical_error(&list, &sample).unwrap(), 0);
            let greedy = rivest_greedy(&sample, &fam).unwrap();
            assert_eq!(empirical_error(&greedy, &sample).unwrap(), err);
        }
    }

    #[test]
    fn erm_finds_the_true_minimum_on_parity() {
        // The four parity points over two variables: no decision list of
        // literal rules is consistent, and error 1 is achievable.
        let rows = [
            (vec![false, false], false),
            (vec![false, true], true),
            (vec![true, false], true),
            (vec![true, true], false),
        ];
        let sample = PacSample::new(
            2,
            rows.iter()
                .map(|(x, l)| PacExample { x: x.clone(), label: *l })
                .collect(),
        )
        .unwrap();
        let fam = FeatureFamily::literals_with_negations(2).unwrap();
        let (list, err) = brute_force_erm(&sample, &fam, 2).unwrap();
        assert_eq!(err, 1);
        assert_eq!(empirical_error(&list, &sample).unwrap(), 1);
        // Deterministic tie-break: a second run returns the same list.
        let (again, err_again) = brute_force_erm(&sample, &fam, 2).unwrap();
        assert_eq!(err_again, 1);
        assert_eq!(again, list);
    }

    #[test]
    fn erm_refuses_oversized_searches() {
        let fam = FeatureFamily::conjunctions(8, 2).unwrap();
        let sample = PacSample::new(8, vec![]).unwrap();
        assert!(matches!(
            brute_force_erm(&sample, &fam, 4),
            Err(Error::SearchSpaceTooLarge(_))
        ));
    }
}
