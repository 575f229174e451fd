//! Probability vectors over known task types and their Bayesian update.

use crate::error::{BprError, Result};
use crate::ids::TypeId;
use serde::{Deserialize, Serialize};

const SUM_TOLERANCE: f64 = 1e-9;

/// Distribution over previously-solved types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Belief(Vec<f64>);

impl Belief {
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "belief over zero types");
        Belief(vec![1.0 / n as f64; n])
    }

    /// Belief over an empty type set; only meaningful for an untrained knowledge base.
    pub(crate) fn empty() -> Self {
        Belief(Vec::new())
    }

    pub fn point_mass(n: usize, at: TypeId) -> Self {
        assert!(at.0 < n, "type {at} out of range for {n} types");
        let mut w = vec![0.0; n];
        w[at.0] = 1.0;
        Belief(w)
    }

    /// Normalises non-negative weights with positive total mass.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(BprError::InvalidBelief("no types".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(BprError::InvalidBelief(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(BprError::InvalidBelief("zero total mass".into()));
        }
        Ok(Belief(weights.into_iter().map(|w| w / total).collect()))
    }

    /// Accepts weights that already sum to one.
    pub fn from_normalized(weights: Vec<f64>) -> Result<Self> {
        let b = Belief(weights);
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(BprError::InvalidBelief("no types".into()));
        }
        if self.0.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(BprError::InvalidBelief(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = self.0.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(BprError::InvalidBelief(format!("weights sum to {total}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn weight(&self, t: TypeId) -> f64 {
        self.0[t.0]
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.0
    }

    /// Shannon entropy in nats, with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        entropy(&self.0)
    }

    /// Posterior given per-type likelihoods of the observed signal.
    pub fn posterior(&self, likelihoods: &[f64]) -> Result<Belief> {
        posterior(&self.0, likelihoods).map(Belief)
    }

    /// Posterior given per-type log-likelihoods; stable for long traces.
    pub fn posterior_from_log(&self, log_likelihoods: &[f64]) -> Result<Belief> {
        check_len(self.0.len(), log_likelihoods.len())?;
        let max = self
            .0
            .iter()
            .zip(log_likelihoods)
            .filter(|(w, _)| **w > 0.0)
            .map(|(_, l)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY || max.is_nan() {
            return Err(BprError::AllLikelihoodsZero);
        }
        let scaled: Vec<f64> = log_likelihoods.iter().map(|l| (l - max).exp()).collect();
        self.posterior(&scaled)
    }
}

pub fn belief_entropy(belief: &Belief) -> f64 {
    belief.entropy()
}

pub(crate) fn entropy(weights: &[f64]) -> f64 {
    // Equal weights give ln k exactly rather than a rounded sum.
    let mut support = weights.iter().filter(|w| **w > 0.0);
    if let Some(first) = support.next() {
        let mut k = 1usize;
        if support.all(|w| {
            k += 1;
            w == first
        }) {
            return (k as f64).ln();
        }
    }
    -weights
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| w * w.ln())
        .sum::<f64>()
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(BprError::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Bayes' rule on raw weight slices: `w'(τ) ∝ ℓ(τ) w(τ)`.
pub(crate) fn posterior(prior: &[f64], likelihoods: &[f64]) -> Result<Vec<f64>> {
    check_len(prior.len(), likelihoods.len())?;
    let mut out: Vec<f64> = prior.iter().zip(likelihoods).map(|(w, l)| w * l).collect();
    let total: f64 = out.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(BprError::AllLikelihoodsZero);
    }
    for w in &mut out {
        *w /= total;
    }
    Ok(out)
}
