//! Empirically audits differential-privacy claims by comparing output
//! distributions on neighboring inputs.
//!
//! An (epsilon, delta)-private mechanism must satisfy
//! `P[M(A) in S] <= e^epsilon * P[M(B) in S] + delta` for every event `S`
//! and neighboring inputs `A`, `B`. The auditor runs a mechanism many times
//! on a fixed neighboring pair, coarsens outputs into cells, and checks the
//! inequality per cell in both directions with Wilson-interval slack. It
//! reports `pass`, `fail` (a confirmed violation), or `inconclusive`
//! (insufficient trials) — never `pass` without statistical power.
//!
//! Run with:
//!
//! ```text
//! cargo run --release --example privacy_audit
//! ```

use dplearn::audit::{bound_check, neighbor_ratio_test, Verdict};
use dplearn::mechanisms::{em_select, AboveThreshold, NoiseMode};
use dplearn::Result;

fn main() -> Result<()> {
    let z = 2.576; // 99% two-sided Wilson intervals
    let epsilon = 1.0;
    let trials = 300_000;

    // Neighboring score vectors for the exponential mechanism: one score
    // moved by its sensitivity 1.
    let scores_a = [0.0, -1.0, -2.0, -3.0];
    let scores_b = [0.0, -2.0, -2.0, -3.0];

    println!("auditing em_select at epsilon = {epsilon}, {trials} trials...");
    let report = neighbor_ratio_test(
        |use_b, src| {
            let scores: &[f64] = if use_b { &scores_b } else { &scores_a };
            em_select(scores, epsilon, src, NoiseMode::Standard)
        },
        epsilon,
        0.0, // pure DP: delta = 0
        trials,
        z,
        42,
    )?;
    println!("  verdict   = {}", report.verdict);
    println!("  statistic = {:.4} (bound e^eps = {:.4})", report.statistic, report.bound);
    for cell in &report.cells {
        println!(
            "    output {}: p_a = {:.4}, p_b = {:.4}, ratio = {:.3}",
            cell.key,
            cell.p_a,
            cell.p_b,
            cell.p_a / cell.p_b
        );
    }
    assert_eq!(report.verdict, Verdict::Pass);
    println!();

    // Control: the same mechanism with noise disabled is just argmax. On a
    // neighboring pair that flips the argmax (one score moved by the
    // sensitivity 1), the outputs are deterministic and disjoint; the
    // auditor must certify the violation.
    println!("auditing the broken (noiseless) variant...");
    let flip_a = [0.5, 0.0];
    let flip_b = [-0.5, 0.0];
    let broken = neighbor_ratio_test(
        |use_b, src| {
            let scores: &[f64] = if use_b { &flip_b } else { &flip_a };
            em_select(scores, epsilon, src, NoiseMode::ZeroNoise)
        },
        epsilon,
        0.0,
        20_000,
        z,
        42,
    )?;
    println!("  verdict   = {} (statistic = {})", broken.verdict, broken.statistic);
    assert_eq!(broken.verdict, Verdict::Fail);
    println!();

    // Underpowered runs must refuse to certify.
    println!("auditing with only 50 trials...");
    let weak = neighbor_ratio_test(
        |use_b, src| {
            let scores: &[f64] = if use_b { &scores_b } else { &scores_a };
            em_select(scores, epsilon, src, NoiseMode::Standard)
        },
        epsilon,
        0.0,
        50,
        z,
        42,
    )?;
    println!("  verdict   = {}", weak.verdict);
    assert_eq!(weak.verdict, Verdict::Inconclusive);
    println!();

    // bound_check audits probabilistic guarantees of the form "the bad event
    // happens with probability at most beta". Here: the sparse-vector
    // accuracy guarantee.
    let epsilon_hat = 1.0;
    let horizon = 100u64;
    let beta = 0.05;
    let threshold = 50.0;
    let alpha = AboveThreshold::accuracy_width(epsilon_hat, horizon, beta);
    println!("auditing the sparse-vector accuracy claim (beta = {beta})...");
    let bound_report = bound_check("svt-accuracy", beta, 50_000, z, 7, |trial, src| {
        let mut inst =
            AboveThreshold::initialize(epsilon_hat, threshold, beta, src, NoiseMode::Standard)?;
        let _ = trial;
        for t in 1..=horizon {
            let query = threshold - 2.0 * alpha + (4.0 * alpha) * (t as f64 / horizon as f64);
            let fired = inst.test(query, src)?;
            if fired {
                return Ok(query < threshold - alpha); // violation: early fire
            }
            if t == horizon {
                return Ok(query > threshold + alpha); // violation: late silence
            }
        }
        Ok(false)
    })?;
    println!(
        "  verdict = {}, violations = {}/{} (allowed rate {beta})",
        bound_report.verdict, bound_report.violations, bound_report.trials
    );
    assert_ne!(bound_report.verdict, Verdict::Fail);

    Ok(())
}
