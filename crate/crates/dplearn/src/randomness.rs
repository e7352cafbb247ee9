//! Seedable randomness for reproducible experiments.
//!
//! Every randomized component in this crate draws from a [`RandomSource`], so
//! a run is fully determined by one root seed. Sources can be *split* into
//! independent child sources by label (and trial index), which keeps parallel
//! Monte Carlo trials reproducible regardless of scheduling: trial `i` always
//! sees the same stream no matter which worker executes it.
//!
//! The generator is ChaCha12, which has a stable, platform-independent output
//! sequence for a given seed. Laplace variates use the inverse-CDF transform
//! of a single uniform draw, so noise streams are reproducible as well.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// FNV-1a on bytes; used to fold split labels into seeds and to fingerprint
/// resolved configurations.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 finalizer; scrambles seed material before keying ChaCha.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A seeded stream of randomness with deterministic splitting.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha12Rng,
}

impl RandomSource {
    /// Creates a source from a root seed. Two sources built from the same
    /// seed produce identical draw sequences.
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// The seed this source was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives a child source from this source's seed and a label. Splitting
    /// is deterministic and does not consume randomness from the parent.
    pub fn split(&self, label: &str) -> RandomSource {
        RandomSource::new(splitmix64(self.seed ^ fnv1a64(label.as_bytes())))
    }

    /// Derives a child source for one trial of a labeled experiment.
    /// `split_index(l, i)` and `split_index(l, j)` are decorrelated for
    /// `i != j`, which makes per-trial parallelism reproducible.
    pub fn split_index(&self, label: &str, index: u64) -> RandomSource {
        let mixed = splitmix64(fnv1a64(label.as_bytes()) ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        RandomSource::new(splitmix64(self.seed ^ mixed))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw from `{-1, +1}`.
    pub fn sign(&mut self) -> i8 {
        if self.rng.random::<bool>() {
            1
        } else {
            -1
        }
    }

    /// Bernoulli draw with success probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!(
                "bernoulli: probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(self.uniform() < p)
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::Parameter("below: n must be positive".into()));
        }
        Ok(self.rng.random_range(0..n))
    }

    /// Zero-mean Laplace draw with the given scale, via the inverse CDF of a
    /// single uniform: for `u` uniform on `(-1/2, 1/2)`,
    /// `x = -scale * sgn(u) * ln(1 - 2|u|)`.
    pub fn laplace(&mut self, scale: f64) -> Result<f64> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Parameter(format!(
                "laplace: scale must be a positive finite real, got {scale}"
            )));
        }
        // Reject the single point u = -1/2 (probability 2^-53) so the log
        // argument stays strictly positive.
        let u = loop {
            let u = self.uniform() - 0.5;
            if u > -0.5 {
                break u;
            }
        };
        Ok(-scale * u.signum() * (1.0 - 2.0 * u.abs()).ln())
    }

    /// Samples an index with probability proportional to `weights`.
    /// Weights must be finite, nonnegative, and not all zero.
    pub fn categorical(&mut self, weights: &[f64]) -> Result<usize> {
        if weights.is_empty() {
            return Err(Error::Parameter("categorical: empty weight vector".into()));
        }
        let mut total = 0.0;
        for (j, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Parameter(format!(
                    "categorical: weight {j} must be finite and nonnegative, got {w}"
                )));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::Parameter(
                "categorical: weights must not all be zero".into(),
            ));
        }
        let mut target = self.uniform() * total;
        for (j, &w) in weights.iter().enumerate() {
            if target < w {
                return Ok(j);
            }
            target -= w;
        }
        // Floating-point slack can leave a vanishing residue; attribute it to
        // the last index that carries mass.
        Ok(weights
            .iter()
            .rposition(|&w| w > 0.0)
            .expect("total > 0 implies a positive weight"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = RandomSource::new(1);
        let mut b = RandomSource::new(2);
        let same = (0..32).filter(|_| a.uniform() == b.uniform()).count();
        assert!(same < 4);
    }

    #[test]
    fn split_is_deterministic_and_labeled() {
        let root = RandomSource::new(42);
        let mut c1 = root.split("mechanisms");
        let mut c2 = root.split("mechanisms");
        let mut other = root.split("streams");
        let x1 = c1.uniform();
        assert_eq!(x1.to_bits(), c2.uniform().to_bits());
        assert_ne!(x1.to_bits(), other.uniform().to_bits());

        let mut t3 = root.split_index("audit", 3);
        let mut t3b = root.split_index("audit", 3);
        let mut t4 = root.split_index("audit", 4);
        let y = t3.uniform();
        assert_eq!(y.to_bits(), t3b.uniform().to_bits());
        assert_ne!(y.to_bits(), t4.uniform().to_bits());
    }

    #[test]
    fn laplace_moments_and_tail() {
        // scale 1: mean 0, variance 2, P(X > 3) = e^{-3}/2.
        let mut src = RandomSource::new(1234);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut tail = 0usize;
        for _ in 0..n {
            let x = src.laplace(1.0).unwrap();
            sum += x;
            sumsq += x * x;
            if x > 3.0 {
                tail += 1;
            }
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        let tail_freq = tail as f64 / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 2.0).abs() < 0.05, "variance {var}");
        assert!((tail_freq - (-3.0f64).exp() / 2.0).abs() < 0.005, "tail {tail_freq}");
    }

    #[test]
    fn laplace_scale_must_be_positive() {
        let mut src = RandomSource::new(0);
        assert!(src.laplace(0.0).is_err());
        assert!(src.laplace(-1.0).is_err());
        assert!(src.laplace(f64::INFINITY).is_err());
    }

    #[test]
    fn categorical_frequencies() {
        let mut src = RandomSource::new(99);
        // Weights (1): always index 0.
        for _ in 0..50 {
            assert_eq!(src.categorical(&[1.0]).unwrap(), 0);
        }
        // Weights (1, 1): index 0 frequency 0.5 +- 0.002 over 1e6 draws.
        let n = 1_000_000usize;
        let mut zeros = 0usize;
        for _ in 0..n {
            if src.categorical(&[1.0, 1.0]).unwrap() == 0 {
                zeros += 1;
            }
        }
        let freq = zeros as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.002, "freq {freq}");
        // Weights (3, 1): index 0 frequency 0.75 +- 0.002 over 1e6 draws.
        let mut zeros = 0usize;
        for _ in 0..n {
            if src.categorical(&[3.0, 1.0]).unwrap() == 0 {
                zeros += 1;
            }
        }
        let freq = zeros as f64 / n as f64;
        assert!((freq - 0.75).abs() < 0.002, "freq {freq}");
    }

    #[test]
    fn categorical_rejects_bad_weights() {
        let mut src = RandomSource::new(5);
        assert!(src.categorical(&[]).is_err());
        assert!(src.categorical(&[0.0, 0.0]).is_err());
        assert!(src.categorical(&[1.0, -0.5]).is_err());
        assert!(src.categorical(&[f64::NAN]).is_err());
    }

    #[test]
    fn zero_weight_indices_never_drawn() {
        let mut src = RandomSource::new(17);
        for _ in 0..10_000 {
            let j = src.categorical(&[0.0, 2.0, 0.0, 1.0]).unwrap();
            assert!(j == 1 || j == 3);
        }
    }
}
