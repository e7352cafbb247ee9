//! Demonstrates the sparse-vector mechanism: privately finding the first
//! query in a stream that crosses a threshold.
//!
//! `AboveThreshold` perturbs the threshold once with Laplace noise of scale
//! `2 / epsilon_hat`, then perturbs each incoming query value with scale
//! `4 / epsilon_hat` and reports only whether the noisy query beat the noisy
//! threshold. It halts after the first report, which is what makes the whole
//! interaction `epsilon_hat`-private regardless of how many quiet queries
//! preceded the halt.
//!
//! The accuracy guarantee: with probability `1 - beta` over `T` queries, the
//! mechanism neither fires while the true value is below `L - alpha` nor
//! stays silent once the true value exceeds `L + alpha`, where
//! `alpha = 8 ln(2 T / beta) / epsilon_hat`.
//!
//! Run with:
//!
//! ```text
//! cargo run --example above_threshold
//! ```

use dplearn::mechanisms::{AboveThreshold, NoiseMode};
use dplearn::randomness::RandomSource;
use dplearn::Result;

fn main() -> Result<()> {
    let epsilon_hat = 0.5;
    let threshold = 100.0;
    let horizon = 200u64;
    let beta = 0.05;
    let alpha = AboveThreshold::accuracy_width(epsilon_hat, horizon, beta);

    println!("per-instance budget = {epsilon_hat}");
    println!("threshold L         = {threshold}");
    println!("accuracy width      = {alpha:.1}");
    println!();

    // A rising query stream: the true crossing happens at query 101.
    let mut source = RandomSource::new(21);
    let mut svt = AboveThreshold::initialize(epsilon_hat, threshold, beta, &mut source, NoiseMode::Standard)?;
    let mut fired_at = None;
    for t in 1..=horizon {
        let query = t as f64; // crosses L = 100 at t = 100
        if svt.test(query, &mut source)? {
            fired_at = Some(t);
            break;
        }
    }
    match fired_at {
        Some(t) => {
            println!("fired at query {t} (true value {t}, threshold {threshold})");
            println!(
                "within the accuracy window [{:.1}, {:.1}]: {}",
                threshold - alpha,
                threshold + alpha,
                (t as f64) >= threshold - alpha && (t as f64) <= threshold + alpha
            );
        }
        None => println!("never fired over {horizon} queries"),
    }
    println!();

    // Once halted, further tests are refused: the privacy accounting covers
    // exactly one positive report.
    let mut halted = AboveThreshold::initialize(epsilon_hat, 0.0, beta, &mut source, NoiseMode::Standard)?;
    while !halted.test(1_000.0, &mut source)? {}
    println!("halted after its positive report: {}", halted.is_halted());
    println!("further tests error: {}", halted.test(1_000.0, &mut source).is_err());
    println!();

    // Empirically, the miss rate over fresh instances stays below beta.
    let trials = 20_000u64;
    let mut misses = 0u64;
    for i in 0..trials {
        let mut src = source.split_index("svt-demo", i);
        let mut inst =
            AboveThreshold::initialize(epsilon_hat, threshold, beta, &mut src, NoiseMode::Standard)?;
        for t in 1..=horizon {
            // Ramp crossing the full accuracy window so both failure modes
            // (early fire, late silence) are observable.
            let query = threshold - 2.0 * alpha + (4.0 * alpha) * (t as f64 / horizon as f64);
            let fired = inst.test(query, &mut src)?;
            if fired {
                if query < threshold - alpha {
                    misses += 1;
                }
                break;
            }
            if !fired && t == horizon && query > threshold + alpha {
                misses += 1;
            }
        }
    }
    println!(
        "accuracy violations: {misses}/{trials} = {:.5} (guarantee: <= {beta})",
        misses as f64 / trials as f64
    );

    Ok(())
}
