//! Policy selection mechanisms mapping a belief to the next policy to run.

mod lookahead;
mod outcomes;

pub use lookahead::{
    expected_entropy, expected_posterior, expected_posterior_entropy, knowledge_gradient,
};
pub use outcomes::CONTINUOUS_PRUNE;

use crate::belief::Belief;
use crate::error::{BprError, Result};
use crate::ids::{argmax, argmin, PolicyId, TypeId};
use crate::kb::KnowledgeBase;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the hypothesised utility `U⁺` of probability-of-improvement is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImprovementTarget {
    Fixed(f64),
    /// `Ū + 0.5 (u_max - Ū)` for the current best expected utility `Ū`.
    Midpoint {
        u_max: f64,
    },
}

/// Uncertainty measure used by belief-entropy selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMode {
    /// Average of the per-signal posterior entropies.
    #[default]
    PerSignal,
    /// Entropy of the averaged (expected) posterior.
    ExpectedPosterior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Greedy,
    EpsGreedy {
        epsilon: f64,
    },
    SampleBelief,
    ProbabilityOfImprovement {
        target: ImprovementTarget,
    },
    ExpectedImprovement {
        u_max: Option<f64>,
    },
    BeliefEntropy {
        kappa: f64,
        mode: EntropyMode,
    },
    KnowledgeGradient,
    /// Always the same policy; a reference point for regret curves.
    Fixed {
        policy: PolicyId,
    },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::EpsGreedy { .. } => "eps_greedy",
            Strategy::SampleBelief => "sample_belief",
            Strategy::ProbabilityOfImprovement { .. } => "pi",
            Strategy::ExpectedImprovement { .. } => "ei",
            Strategy::BeliefEntropy { .. } => "be",
            Strategy::KnowledgeGradient => "kg",
            Strategy::Fixed { .. } => "fixed",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Strategy::EpsGreedy { epsilon } if !(0.0..=1.0).contains(epsilon) => Err(
                BprError::InvalidArgument(format!("epsilon must lie in [0, 1], got {epsilon}")),
            ),
            Strategy::BeliefEntropy { kappa, .. } if !(*kappa > 0.0) => Err(
                BprError::InvalidArgument(format!("kappa must be positive, got {kappa}")),
            ),
            _ => Ok(()),
        }
    }

    /// Picks the policy for episode `t` (1-based) of a `horizon`-episode run.
    pub fn select<R: Rng + ?Sized>(
        &self,
        kb: &KnowledgeBase,
        belief: &Belief,
        t: usize,
        horizon: usize,
        rng: &mut R,
    ) -> Result<PolicyId> {
        if belief.len() != kb.n_types() {
            return Err(BprError::DimensionMismatch {
                expected: kb.n_types(),
                actual: belief.len(),
            });
        }
        match self {
            Strategy::Greedy => Ok(select_greedy(kb, belief)),
            Strategy::EpsGreedy { epsilon } => Ok(select_eps_greedy(kb, belief, *epsilon, rng)),
            Strategy::SampleBelief => Ok(select_sample_belief(kb, belief, rng)),
            Strategy::ProbabilityOfImprovement { target } => {
                let u_plus = match target {
                    ImprovementTarget::Fixed(u) => *u,
                    ImprovementTarget::Midpoint { u_max } => default_u_plus(kb, belief, *u_max),
                };
                Ok(select_pi(kb, belief, u_plus))
            }
            Strategy::ExpectedImprovement { u_max } => Ok(select_ei_capped(kb, belief, *u_max)),
            Strategy::BeliefEntropy { kappa, mode } => select_be_with(kb, belief, *kappa, *mode),
            Strategy::KnowledgeGradient => select_kg(kb, belief, t, horizon),
            Strategy::Fixed { policy } => {
                if policy.0 >= kb.n_policies() {
                    return Err(BprError::InvalidArgument(format!(
                        "policy {policy} not in library"
                    )));
                }
                Ok(*policy)
            }
        }
    }
}

/// `κ` that makes the utility and entropy terms commensurate.
pub fn default_kappa(u_min: f64, u_max: f64, n_types: usize) -> f64 {
    let scale = if n_types > 1 {
        (n_types as f64).ln()
    } else {
        1.0
    };
    (u_max - u_min) / scale
}

fn best_expected_utility(kb: &KnowledgeBase, belief: &Belief) -> f64 {
    kb.expected_utilities(belief)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn default_u_plus(kb: &KnowledgeBase, belief: &Belief, u_max: f64) -> f64 {
    let best = best_expected_utility(kb, belief);
    best + 0.5 * (u_max - best)
}

pub fn select_greedy(kb: &KnowledgeBase, belief: &Belief) -> PolicyId {
    PolicyId(argmax(kb.expected_utilities(belief)).expect("empty library"))
}

pub fn select_eps_greedy<R: Rng + ?Sized>(
    kb: &KnowledgeBase,
    belief: &Belief,
    epsilon: f64,
    rng: &mut R,
) -> PolicyId {
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        PolicyId(rng.random_range(0..kb.n_policies()))
    } else {
        select_greedy(kb, belief)
    }
}

/// Draws a type from the belief and plays its best response.
pub fn select_sample_belief<R: Rng + ?Sized>(
    kb: &KnowledgeBase,
    belief: &Belief,
    rng: &mut R,
) -> PolicyId {
    kb.best_response(sample_type(belief, rng))
}

pub(crate) fn sample_type<R: Rng + ?Sized>(belief: &Belief, rng: &mut R) -> TypeId {
    let x: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in belief.weights().iter().enumerate() {
        if *w > 0.0 {
            last_positive = i;
        }
        acc += w;
        if x < acc && *w > 0.0 {
            return TypeId(i);
        }
    }
    TypeId(last_positive)
}

/// Policy most likely to reach utility `u_plus`: `argmax Σ β(τ)(1 − F(U⁺|τ,π))`.
pub fn select_pi(kb: &KnowledgeBase, belief: &Belief, u_plus: f64) -> PolicyId {
    let best = best_expected_utility(kb, belief);
    if u_plus <= best {
        log::warn!("improvement target {u_plus} does not exceed current best {best}");
    }
    let scores = kb.policy_ids().map(|p| {
        belief
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(t, w)| w * (1.0 - kb.performance(TypeId(t), p).cdf(u_plus)))
            .sum::<f64>()
    });
    PolicyId(argmax(scores).expect("empty library"))
}

/// Policy most likely to improve on the current best: `argmin Σ β(τ) F(Ū|τ,π)`.
pub fn select_ei(kb: &KnowledgeBase, belief: &Belief) -> PolicyId {
    select_ei_capped(kb, belief, None)
}

/// Expected improvement with improvement mass integrated up to `u_max`.
pub fn select_ei_capped(kb: &KnowledgeBase, belief: &Belief, u_max: Option<f64>) -> PolicyId {
    let best = best_expected_utility(kb, belief);
    let mass_below = |p: PolicyId| {
        belief
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(t, w)| {
                let perf = kb.performance(TypeId(t), p);
                let cap = u_max.map_or(1.0, |u| perf.cdf(u));
                w * (perf.cdf(best) + 1.0 - cap)
            })
            .sum::<f64>()
    };
    PolicyId(argmin(kb.policy_ids().map(mass_below)).expect("empty library"))
}

/// `argmax [Ũ(π) − κ H(β|π)]` using the default entropy measure.
pub fn select_be(kb: &KnowledgeBase, belief: &Belief, kappa: f64) -> Result<PolicyId> {
    select_be_with(kb, belief, kappa, EntropyMode::default())
}

pub fn select_be_with(
    kb: &KnowledgeBase,
    belief: &Belief,
    kappa: f64,
    mode: EntropyMode,
) -> Result<PolicyId> {
    let eu = kb.expected_utilities(belief);
    let entropies: Vec<f64> = (0..kb.n_policies())
        .into_par_iter()
        .map(|p| match mode {
            EntropyMode::PerSignal => expected_entropy(kb, belief, PolicyId(p)),
            EntropyMode::ExpectedPosterior => expected_posterior_entropy(kb, belief, PolicyId(p)),
        })
        .collect::<Result<_>>()?;
    let scores = eu.iter().zip(&entropies).map(|(u, h)| u - kappa * h);
    Ok(PolicyId(argmax(scores).expect("empty library")))
}

/// Knowledge gradient of every policy in the library.
pub fn knowledge_gradients(kb: &KnowledgeBase, belief: &Belief) -> Result<Vec<f64>> {
    (0..kb.n_policies())
        .into_par_iter()
        .map(|p| knowledge_gradient(kb, belief, PolicyId(p)))
        .collect()
}

/// `argmax [Ũ(π) + (K − t) ν_π]` for episode `t` of `horizon`.
pub fn select_kg(
    kb: &KnowledgeBase,
    belief: &Belief,
    t: usize,
    horizon: usize,
) -> Result<PolicyId> {
    let eu = kb.expected_utilities(belief);
    let remaining = horizon.saturating_sub(t) as f64;
    if remaining == 0.0 {
        return Ok(PolicyId(argmax(eu).expect("empty library")));
    }
    let kg = knowledge_gradients(kb, belief)?;
    let scores = eu.iter().zip(&kg).map(|(u, v)| u + remaining * v);
    Ok(PolicyId(argmax(scores).expect("empty library")))
}
