//! Bandit and Bayesian-optimisation baselines over the policy library.

mod gpucb;
mod ucb1;

pub use gpucb::{GpUcbAgent, GpUcbState, DEFAULT_DELTA};
pub use ucb1::{Ucb1Agent, Ucb1State};

/// Maps a utility into `[0, 1]` given the domain's configured range.
pub fn rescale(u: f64, range: (f64, f64)) -> f64 {
    ((u - range.0) / (range.1 - range.0)).clamp(0.0, 1.0)
}
