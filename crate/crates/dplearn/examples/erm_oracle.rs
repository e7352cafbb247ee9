//! Exhaustively searches for the minimum-error decision list on a sample and
//! round-trips artifacts through the text formats.
//!
//! The brute-force oracle enumerates every decision list up to a length cap
//! (with branch-and-bound pruning) and returns one achieving the minimum
//! sample error. It is exponential by nature — the search-space formula
//! guards against runaway instances — but at small scale it provides ground
//! truth to judge the greedy and private learners against, including on
//! non-realizable samples where greedy covering can get stuck.
//!
//! Run with:
//!
//! ```text
//! cargo run --example erm_oracle
//! ```

use dplearn::audit::{brute_force_erm, erm_search_space};
use dplearn::decision_lists::{empirical_error, rivest_greedy, FeatureFamily};
use dplearn::io::{decision_list_from_json, decision_list_to_json, pac_sample_to_csv};
use dplearn::randomness::RandomSource;
use dplearn::streams::{pac_sample, random_decision_list, PacDistribution};
use dplearn::Result;

fn main() -> Result<()> {
    let dim = 4;
    let family = FeatureFamily::literals_with_negations(dim)?;
    let max_length = 3;

    println!(
        "search space for {} features, lists up to length {max_length}: {} lists",
        family.len(),
        erm_search_space(family.len(), max_length)
    );
    println!();

    // Realizable case: the oracle must reach zero error, matching greedy.
    let mut source = RandomSource::new(17);
    let target = random_decision_list(&family, 2, 1, &mut source)?;
    let sample = pac_sample(&target, dim, &PacDistribution::Uniform, 200, &mut source)?;
    let (best, best_error) = brute_force_erm(&sample, &family, max_length)?;
    let greedy = rivest_greedy(&sample, &family)?;
    println!("realizable sample of {}:", sample.len());
    println!("  oracle minimum error = {best_error} ({} rules)", best.len());
    println!(
        "  greedy error         = {} ({} rules)",
        empirical_error(&greedy, &sample)?,
        greedy.len()
    );
    println!();

    // Non-realizable case: parity labels cannot be matched by short lists,
    // and the oracle reports the exact best achievable error.
    let parity_family = FeatureFamily::literals_with_negations(2)?;
    let rows = [
        (vec![false, false], false),
        (vec![false, true], true),
        (vec![true, false], true),
        (vec![true, true], false),
    ];
    let parity = dplearn::decision_lists::PacSample::new(
        2,
        rows.iter()
            .map(|(x, y)| dplearn::decision_lists::PacExample { x: x.clone(), label: *y })
            .collect(),
    )?;
    let (_, parity_error) = brute_force_erm(&parity, &parity_family, 4)?;
    println!("parity over 2 variables: minimum error of any list = {parity_error}");
    println!();

    // Oversized searches are refused up front rather than left to run
    // forever.
    let big_family = FeatureFamily::conjunctions(8, 2)?;
    let big_target = random_decision_list(&big_family, 2, 1, &mut source)?;
    let big_sample = pac_sample(&big_target, 8, &PacDistribution::Uniform, 10, &mut source)?;
    let refused = brute_force_erm(&big_sample, &big_family, 4);
    println!(
        "search over {} conjunction features refused: {}",
        big_family.len(),
        refused.is_err()
    );
    println!();

    // Artifacts serialize to stable text formats.
    let json = decision_list_to_json(&best)?;
    let back = decision_list_from_json(&json)?;
    assert_eq!(best, back);
    println!("best list as JSON:\n{json}");
    let csv = pac_sample_to_csv(&parity);
    println!("parity sample as CSV:\n{csv}");

    Ok(())
}
