//! Learns decision lists privately with the greedy-cover learner and
//! compares against the non-private greedy baseline.
//!
//! A decision list tests features in order and outputs the bit of the first
//! feature that fires. The non-private baseline repeatedly picks the
//! feature/bit pair that covers the most remaining examples without error.
//! The private learner replaces each greedy argmax with an exponential
//! mechanism over (feature, bit) candidates scored by how few examples they
//! misfire on, so each of the `M + 1` rounds is `epsilon_per_round`-private.
//!
//! Run with:
//!
//! ```text
//! cargo run --example pac_decision_lists
//! ```

use dplearn::decision_lists::{
    cover_error_bound, dp_greedy_cover, empirical_error, epsilon_per_round_for, pac_sample_bound,
    rivest_greedy, FeatureFamily,
};
use dplearn::mechanisms::NoiseMode;
use dplearn::randomness::RandomSource;
use dplearn::streams::{pac_sample, random_decision_list, PacDistribution};
use dplearn::Result;

fn main() -> Result<()> {
    let dim = 8;
    let rules = 3;
    let alternations = 2;
    let sample_size = 4_000;
    let epsilon_per_round = 0.5;
    let beta = 0.1;

    let family = FeatureFamily::literals_with_negations(dim)?;
    let mut source = RandomSource::new(5);

    // A hidden target list over the family, and labeled samples from it.
    let target = random_decision_list(&family, rules, alternations, &mut source)?;
    let sample = pac_sample(
        &target,
        dim,
        &PacDistribution::Uniform,
        sample_size,
        &mut source,
    )?;

    println!("family: {} ({} features)", family.descriptor(), family.len());
    println!("target list: {} rules, {} alternations", rules, alternations);
    println!("sample size: {sample_size}");
    println!();

    // Non-private baseline: exact greedy cover, zero error on realizable
    // samples.
    let greedy = rivest_greedy(&sample, &family)?;
    let greedy_error = empirical_error(&greedy, &sample)?;
    println!(
        "greedy baseline: {} rules, {} sample errors",
        greedy.len(),
        greedy_error
    );

    // Private learner at the same sample.
    let private = dp_greedy_cover(&sample, &family, epsilon_per_round, &mut source, NoiseMode::Standard)?;
    let private_error = empirical_error(&private, &sample)?;
    let candidates = family.len() as u64 + 1; // the family plus a constant rule
    let bound = cover_error_bound(candidates, epsilon_per_round, beta)?;
    println!(
        "private learner: {} rules, {} sample errors (bound {:.1} w.p. {:.0}%)",
        private.len(),
        private_error,
        bound,
        (1.0 - beta) * 100.0
    );
    println!();

    // With noise switched off the exponential mechanism degenerates to the
    // exact argmax and the learner recovers the greedy behavior: zero error.
    let exact = dp_greedy_cover(
        &sample,
        &family,
        epsilon_per_round,
        &mut source,
        NoiseMode::ZeroNoise,
    )?;
    println!(
        "zero-noise control: {} sample errors",
        empirical_error(&exact, &sample)?
    );
    println!();

    // Budgeting helpers: how to split a total (epsilon, delta) budget across
    // rounds, and how many samples PAC learning needs at a given accuracy.
    let per_round = epsilon_per_round_for(1.0, 1e-6)?;
    println!("per-round budget for total (1, 1e-6): {per_round:.4}");
    // Lists of at most r rules over M features shatter no more than
    // about (r + 1) ln M points; that estimate feeds the statistical term.
    let vc = (rules as f64 + 1.0) * (candidates as f64).ln();
    let needed = pac_sample_bound(candidates, 0.05, beta, 1.0, 1e-6, vc)?;
    println!("sample bound at accuracy 0.05: {needed}");

    Ok(())
}
