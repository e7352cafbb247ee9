//! Differentially private learners for decision lists and large-margin
//! halfspaces, with the shared machinery they are built from and the
//! harness that audits them.
//!
//! The crate has two learners at its core:
//!
//! * **Private greedy cover** ([`decision_lists::dp_greedy_cover`]) — PAC
//!   learning of decision lists by a greedy set-cover loop in which each
//!   rule is chosen by the exponential mechanism, so the whole list is
//!   differentially private with respect to the training sample.
//! * **Private Winnow** ([`dp_winnow::DpWinnow`]) — online learning of
//!   large-margin halfspaces over `{-1, +1}^d` that combines a confident
//!   multiplicative-weights learner ([`winnow::ConfidentWinnow`]), released
//!   weight approximations built from a few categorical draws, and the
//!   sparse-vector technique ([`mechanisms::AboveThreshold`]) to decide
//!   privately when the released weights must change.
//!
//! Around them sit the supporting modules:
//!
//! * [`randomness`] — one seeded, splittable randomness source used by every
//!   randomized component, so runs are reproducible and parallelizable;
//! * [`mechanisms`] — the exponential mechanism, above-threshold, and the
//!   advanced-composition helper;
//! * [`reductions`] — decision lists as margin halfspaces, the nonnegative
//!   doubling trick, and point-function embeddings;
//! * [`streams`] — target and data generators for both learners;
//! * [`audit`] — neighbor ratio tests, Monte Carlo bound checks, and a
//!   brute-force empirical-risk-minimization oracle;
//! * [`io`] — deterministic CSV/JSON serialization of every artifact type;
//! * [`transcript`] — the per-round record of an online run;
//! * [`harness`] — the `dplearn` command-line interface.
//!
//! The `examples/` directory exercises each capability end to end; start
//! with `cargo run --example params_solver`.

pub mod audit;
pub mod decision_lists;
pub mod dp_winnow;
pub mod error;
pub mod harness;
pub mod io;
pub mod mechanisms;
pub mod randomness;
pub mod reductions;
pub mod streams;
pub mod transcript;
pub mod winnow;

pub use error::{Error, Result};
