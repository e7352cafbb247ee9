//! Runs the confident variant of Winnow on a realizable stream and checks
//! the update bound.
//!
//! Classic Winnow updates only on mistakes. The confident variant also
//! updates on rounds where the prediction was correct but the margin
//! `|<w, x>|` fell below `c * rho`, provided the round is flagged for
//! confidence checking. Both kinds of update make the same guaranteed
//! progress in potential, so the total number of updates is at most
//! `ln d / ((1 - c) * eta * rho - eta^2 / 2)` on any stream that some
//! `rho`-margin halfspace labels perfectly.
//!
//! Run with:
//!
//! ```text
//! cargo run --example confident_winnow
//! ```

use dplearn::randomness::RandomSource;
use dplearn::streams::{online_stream, sparse_target, StreamDistribution};
use dplearn::winnow::{run_confident_winnow, ConfidentWinnowParams};
use dplearn::Result;

fn main() -> Result<()> {
    let dim = 64;
    let sparsity = 5; // the target is a majority vote over 5 coordinates
    let horizon = 5_000;
    let confidence = 0.25;

    // A k-sparse majority target (odd k) has exact margin 1/k on sign
    // vectors: the vote can never tie.
    let target = sparse_target(dim, sparsity)?;
    let rho = target.claimed_margin;
    let eta = (1.0 - confidence) * rho / 2.0;
    let params = ConfidentWinnowParams::new(eta, confidence, rho)?;

    let mut source = RandomSource::new(7);
    let stream = online_stream(
        &target,
        horizon,
        StreamDistribution::UniformSigns,
        &mut source,
    )?;

    // Flag every round for confidence checking (b = true), the adversarial
    // worst case for the update counter.
    let flagged: Vec<_> = stream.into_iter().map(|ex| (ex, true)).collect();
    let transcript = run_confident_winnow(&flagged, dim, params)?;

    let bound = params.update_bound(dim)?;
    println!("dimension          = {dim}");
    println!("margin rho         = {rho:.4}");
    println!("learning rate eta  = {eta:.4}");
    println!("confidence c       = {confidence}");
    println!("rounds             = {}", transcript.len());
    println!("mistakes           = {}", transcript.mistakes());
    println!("updates            = {}", transcript.updates());
    println!("update bound       = {bound:.2}");
    println!(
        "bound respected    = {}",
        (transcript.updates() as f64) <= bound
    );
    println!();
    println!(
        "guaranteed potential drop per update = {:.6}",
        params.potential_drop()
    );

    // The transcript serializes to CSV for offline inspection.
    let csv = transcript.to_online_csv();
    let head: Vec<&str> = csv.lines().take(4).collect();
    println!();
    println!("transcript head:");
    for line in head {
        println!("  {line}");
    }

    Ok(())
}
