//! One-step look-ahead quantities: expected posterior, expected entropy,
//! and the knowledge gradient.

use super::outcomes::{active_types, for_each_outcome};
use crate::belief::{entropy, Belief};
use crate::error::Result;
use crate::ids::{PolicyId, TypeId};
use crate::kb::KnowledgeBase;

/// `β^π(τ) ∝ β(τ) Σ_σ F^β_π(σ) F^τ_π(σ)`: the belief re-weighted by how well
/// each type predicts the signals expected from running `policy`.
pub fn expected_posterior(kb: &KnowledgeBase, belief: &Belief, policy: PolicyId) -> Result<Belief> {
    let active = active_types(kb, belief, policy)?;
    let mut acc = vec![0.0; active.len()];
    for_each_outcome(kb, &active, policy, |weight, lik, _| {
        for (a, l) in acc.iter_mut().zip(lik) {
            *a += weight * l;
        }
    })?;
    let mut out = vec![0.0; kb.n_types()];
    for (k, t) in active.idx.iter().enumerate() {
        out[*t] = active.w[k] * acc[k];
    }
    Ok(Belief::from_weights(out).unwrap_or_else(|_| belief.clone()))
}

/// Entropy of the expected posterior, `H(β^π)`.
pub fn expected_posterior_entropy(
    kb: &KnowledgeBase,
    belief: &Belief,
    policy: PolicyId,
) -> Result<f64> {
    Ok(expected_posterior(kb, belief, policy)?.entropy())
}

/// `E_σ[H(β | σ, π)]`: average entropy of the per-signal posteriors.
pub fn expected_entropy(kb: &KnowledgeBase, belief: &Belief, policy: PolicyId) -> Result<f64> {
    let active = active_types(kb, belief, policy)?;
    let mut total = 0.0;
    let mut mass = 0.0;
    for_each_outcome(kb, &active, policy, |weight, _, post| {
        total += weight * entropy(post);
        mass += weight;
    })?;
    Ok(if mass > 0.0 {
        total / mass
    } else {
        belief.entropy()
    })
}

/// Expected gain in the best achievable expected utility from observing the
/// signal of `policy`, with each signal outcome's posterior evaluated exactly.
pub fn knowledge_gradient(kb: &KnowledgeBase, belief: &Belief, policy: PolicyId) -> Result<f64> {
    let active = active_types(kb, belief, policy)?;
    let rows: Vec<&[f64]> = active
        .idx
        .iter()
        .map(|t| kb.means_for_type(TypeId(*t)))
        .collect();
    let mut scratch = vec![0.0; kb.n_policies()];
    let mut averaged = vec![0.0; active.len()];
    let mut best_after = 0.0;
    let mut mass = 0.0;
    for_each_outcome(kb, &active, policy, |weight, _, post| {
        scratch.iter_mut().for_each(|s| *s = 0.0);
        for (a, p) in post.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            averaged[a] += weight * p;
            for (s, m) in scratch.iter_mut().zip(rows[a]) {
                *s += p * m;
            }
        }
        best_after += weight * max(&scratch);
        mass += weight;
    })?;
    if mass <= 0.0 {
        return Ok(0.0);
    }
    // Baseline uses the same quadrature-averaged belief, which keeps the gain
    // non-negative by convexity of the max.
    scratch.iter_mut().for_each(|s| *s = 0.0);
    for (a, row) in rows.iter().enumerate() {
        for (s, m) in scratch.iter_mut().zip(*row) {
            *s += averaged[a] / mass * m;
        }
    }
    Ok(best_after / mass - max(&scratch))
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
