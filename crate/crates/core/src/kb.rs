//! Trained performance and observation models for every (type, policy) pair.

use crate::belief::Belief;
use crate::error::{BprError, Result};
use crate::ids::{argmax, PolicyId, TypeId};
use crate::models::{ObservationModel, PerformanceModel};
use crate::signal::{Signal, SignalKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeInfo {
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyInfo {
    pub name: String,
    /// Index of the policy in the domain's full policy set.
    pub domain_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPair {
    pub performance: PerformanceModel,
    pub observation: ObservationModel,
}

/// Immutable after construction; share freely across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    signal_kind: SignalKind,
    types: Vec<TypeInfo>,
    policies: Vec<PolicyInfo>,
    /// `[type][policy]`
    models: Vec<Vec<ModelPair>>,
    prior: Belief,
    /// Distinct trace signals seen in training, per policy.
    signal_support: Option<Vec<Vec<Signal>>>,
    /// `[type * n_policies + policy]`
    means: Vec<f64>,
}

impl KnowledgeBase {
    pub fn new(
        signal_kind: SignalKind,
        types: Vec<TypeInfo>,
        policies: Vec<PolicyInfo>,
        models: Vec<Vec<ModelPair>>,
        prior: Belief,
    ) -> Result<Self> {
        if models.len() != types.len() {
            return Err(BprError::DimensionMismatch {
                expected: types.len(),
                actual: models.len(),
            });
        }
        for row in &models {
            if row.len() != policies.len() {
                return Err(BprError::DimensionMismatch {
                    expected: policies.len(),
                    actual: row.len(),
                });
            }
        }
        if !types.is_empty() {
            prior.validate()?;
        }
        if prior.len() != types.len() {
            return Err(BprError::DimensionMismatch {
                expected: types.len(),
                actual: prior.len(),
            });
        }
        let means = models
            .iter()
            .flat_map(|row| row.iter().map(|m| m.performance.mean()))
            .collect();
        Ok(Self {
            signal_kind,
            types,
            policies,
            models,
            prior,
            signal_support: None,
            means,
        })
    }

    /// Knowledge base with a uniform prior.
    pub fn with_uniform_prior(
        signal_kind: SignalKind,
        types: Vec<TypeInfo>,
        policies: Vec<PolicyInfo>,
        models: Vec<Vec<ModelPair>>,
    ) -> Result<Self> {
        let prior = if types.is_empty() {
            Belief::empty()
        } else {
            Belief::uniform(types.len())
        };
        Self::new(signal_kind, types, policies, models, prior)
    }

    pub fn with_signal_support(mut self, support: Vec<Vec<Signal>>) -> Result<Self> {
        if support.len() != self.policies.len() {
            return Err(BprError::DimensionMismatch {
                expected: self.policies.len(),
                actual: support.len(),
            });
        }
        self.signal_support = Some(support);
        Ok(self)
    }

    pub fn with_prior(mut self, prior: Belief) -> Result<Self> {
        prior.validate()?;
        if prior.len() != self.types.len() {
            return Err(BprError::DimensionMismatch {
                expected: self.types.len(),
                actual: prior.len(),
            });
        }
        self.prior = prior;
        Ok(self)
    }

    pub fn signal_kind(&self) -> SignalKind {
        self.signal_kind
    }

    pub fn n_types(&self) -> usize {
        self.types.len()
    }

    pub fn n_policies(&self) -> usize {
        self.policies.len()
    }

    pub fn types(&self) -> &[TypeInfo] {
        &self.types
    }

    pub fn policies(&self) -> &[PolicyInfo] {
        &self.policies
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    pub fn models(&self) -> &[Vec<ModelPair>] {
        &self.models
    }

    pub fn signal_support(&self) -> Option<&[Vec<Signal>]> {
        self.signal_support.as_deref()
    }

    pub fn pair(&self, t: TypeId, p: PolicyId) -> &ModelPair {
        &self.models[t.0][p.0]
    }

    pub fn performance(&self, t: TypeId, p: PolicyId) -> &PerformanceModel {
        &self.models[t.0][p.0].performance
    }

    pub fn observation(&self, t: TypeId, p: PolicyId) -> &ObservationModel {
        &self.models[t.0][p.0].observation
    }

    /// `E[U | τ, π]`
    pub fn mean(&self, t: TypeId, p: PolicyId) -> f64 {
        self.means[t.0 * self.policies.len() + p.0]
    }

    /// Row of `E[U | τ, ·]` over the library.
    pub fn means_for_type(&self, t: TypeId) -> &[f64] {
        let n = self.policies.len();
        &self.means[t.0 * n..(t.0 + 1) * n]
    }

    pub fn policy_ids(&self) -> impl Iterator<Item = PolicyId> {
        (0..self.policies.len()).map(PolicyId)
    }

    pub fn type_ids(&self) -> impl Iterator<Item = TypeId> {
        (0..self.types.len()).map(TypeId)
    }

    fn check_belief(&self, belief: &Belief) -> Result<()> {
        if belief.len() != self.types.len() {
            return Err(BprError::DimensionMismatch {
                expected: self.types.len(),
                actual: belief.len(),
            });
        }
        Ok(())
    }

    /// `Σ_τ β(τ) E[U | τ, π]`
    pub fn expected_utility(&self, belief: &Belief, policy: PolicyId) -> f64 {
        belief
            .weights()
            .iter()
            .enumerate()
            .map(|(t, w)| w * self.mean(TypeId(t), policy))
            .sum()
    }

    pub fn expected_utilities(&self, belief: &Belief) -> Vec<f64> {
        self.policy_ids()
            .map(|p| self.expected_utility(belief, p))
            .collect()
    }

    /// Policy with the highest expected utility on type `t`.
    pub fn best_response(&self, t: TypeId) -> PolicyId {
        PolicyId(argmax(self.means_for_type(t).iter().copied()).expect("empty library"))
    }

    pub fn log_likelihoods(&self, policy: PolicyId, signal: &Signal) -> Result<Vec<f64>> {
        self.type_ids()
            .map(|t| {
                let pair = self.pair(t, policy);
                pair.observation.log_likelihood(&pair.performance, signal)
            })
            .collect()
    }

    pub fn likelihoods(&self, policy: PolicyId, signal: &Signal) -> Result<Vec<f64>> {
        Ok(self
            .log_likelihoods(policy, signal)?
            .into_iter()
            .map(f64::exp)
            .collect())
    }

    /// Sub-library restricted to the given types and policies, with a uniform prior.
    pub fn restrict(&self, types: &[TypeId], policies: &[PolicyId]) -> Result<KnowledgeBase> {
        if types.is_empty() || policies.is_empty() {
            return Err(BprError::InvalidArgument(
                "restriction must keep at least one type and policy".into(),
            ));
        }
        let models = types
            .iter()
            .map(|t| policies.iter().map(|p| self.pair(*t, *p).clone()).collect())
            .collect();
        let kb = KnowledgeBase::new(
            self.signal_kind,
            types.iter().map(|t| self.types[t.0].clone()).collect(),
            policies
                .iter()
                .map(|p| self.policies[p.0].clone())
                .collect(),
            models,
            Belief::uniform(types.len()),
        )?;
        match &self.signal_support {
            Some(s) => kb.with_signal_support(policies.iter().map(|p| s[p.0].clone()).collect()),
            None => Ok(kb),
        }
    }
}

/// Bayes update of `belief` on observing `signal` after running `policy`.
pub fn update_belief(
    kb: &KnowledgeBase,
    belief: &Belief,
    policy: PolicyId,
    signal: &Signal,
) -> Result<Belief> {
    kb.check_belief(belief)?;
    let logs = kb.log_likelihoods(policy, signal)?;
    belief.posterior_from_log(&logs)
}

/// `Σ_τ β(τ) E[U | τ, π]`
pub fn expected_utility(kb: &KnowledgeBase, belief: &Belief, policy: PolicyId) -> f64 {
    kb.expected_utility(belief, policy)
}
