//! Solves the coupled parameter system behind the private online learner.
//!
//! The learner needs five constants that depend on each other: the switching
//! budget `K` bounds how often the public weights may change, the per-instance
//! budget `epsilon_hat` and learning rate `eta` are set by splitting the
//! privacy budget across those `K` switches, and `K` in turn depends on `eta`
//! through the multiplicative-weights update bound. `DpWinnowParams::solve`
//! finds the exact integer fixed point; this example prints the solution and
//! re-substitutes it into each defining equation to show the residuals.
//!
//! Run with:
//!
//! ```text
//! cargo run --example params_solver
//! ```

use dplearn::dp_winnow::DpWinnowParams;
use dplearn::Result;

fn main() -> Result<()> {
    let horizon = 10_000;
    let dim = 1 << 10;
    let rho = 0.1;
    let epsilon = 1.0;
    let delta = 1e-6;
    let beta = 0.05;
    let confidence = 0.25;

    println!("inputs:");
    println!("  horizon T   = {horizon}");
    println!("  dimension d = {dim}");
    println!("  margin rho  = {rho}");
    println!("  privacy     = ({epsilon}, {delta})");
    println!("  failure prob beta = {beta}");
    println!("  confidence c      = {confidence}");
    println!();

    let params = DpWinnowParams::solve(horizon, dim, rho, epsilon, delta, beta, confidence)?;

    println!("solved constants:");
    println!("  switching budget K  = {}", params.switching_bound);
    println!("  per-instance budget = {:.6e}", params.epsilon_hat);
    println!("  learning rate eta   = {:.6e}", params.eta);
    println!("  firing threshold L  = {:.3}", params.threshold);
    println!("  sample count m      = {}", params.sample_count);
    println!();

    // Each equation of the system, evaluated at the solution. A residual is
    // the gap between the left- and right-hand sides; the solver guarantees
    // these are zero up to floating-point rounding.
    println!("re-substitution residuals:");
    for (name, r) in params.residuals() {
        println!("  {r:>12.3e}  {name}");
    }
    println!("  max residual = {:.3e}", params.max_residual());
    println!();

    println!(
        "eta < rho/2 check: {:.6e} < {:.6e} -> {}",
        params.eta,
        rho / 2.0,
        params.eta < rho / 2.0
    );
    println!(
        "mistake bound K * 16 ln(2T^2/beta) / epsilon_hat = {:.3e}",
        params.mistake_bound()
    );

    Ok(())
}
