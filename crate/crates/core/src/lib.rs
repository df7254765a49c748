//! Unbalanced step-reinforced random walks, their representation as
//! randomly weighted sums through percolation on random recursive trees,
//! the limit constants of the weights, and a reproducible Monte Carlo
//! harness for the normal and stable limit theorems.
//!
//! The building blocks are a [`RandomnessTape`] holding the parent choices
//! and coin flips, walk simulators driven by it, the percolation forest that
//! turns the same tape into component weights, and the numerics needed to
//! compare simulated laws with their limits.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod acceptance;
pub mod cli;
pub mod constants;
pub mod error;
pub mod moments;
pub mod params;
pub mod percolation;
pub mod quadrature;
pub mod seed;
pub mod special;
pub mod stable;
pub mod stats;
pub mod steps;
pub mod tape;
pub mod walk;
pub mod weights;

pub use error::{Error, Result};
pub use params::{classify_regime, derive_params, DerivedParams, Regime, Scaling, WalkParams};
pub use seed::{derive_seed, stream_rng, Stream, StreamRng};
pub use stable::{cdf_stable, normalizer, quantile_stable, sample_stable, NormalizingSequence, StableLaw};
pub use steps::StepSource;
pub use tape::RandomnessTape;
pub use walk::{simulate_erw, simulate_unbalanced_walk, simulate_walk, ErwPath, WalkPath};
