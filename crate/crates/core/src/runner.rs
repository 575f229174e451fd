//! Online episode loop shared by BPR and the baselines.

use crate::belief::Belief;
use crate::domains::{estimate_policy_values, Domain};
use crate::error::{BprError, Result};
use crate::ids::PolicyId;
use crate::kb::{update_belief, KnowledgeBase};
use crate::selection::Strategy;
use crate::signal::{EpisodeOutcome, Signal};
use crate::streams::{episode_stream, stream, Purpose};
use rand::RngCore;
use serde::{Deserialize, Serialize};

/// Episodes used to estimate the true expected utility of every policy on a task.
pub const DEFAULT_VALUE_EPISODES: usize = 100_000;

/// Anything that picks a library policy each episode and learns from the outcome.
pub trait Selector {
    fn select(&mut self, t: usize, horizon: usize, rng: &mut dyn RngCore) -> Result<PolicyId>;
    fn observe(&mut self, policy: PolicyId, outcome: &EpisodeOutcome) -> Result<()>;
    /// Belief entropy before the next selection, when the agent keeps a belief.
    fn entropy(&self) -> Option<f64> {
        None
    }
}

/// BPR agent: a belief over types plus a selection strategy.
pub struct BprAgent<'a> {
    kb: &'a KnowledgeBase,
    belief: Belief,
    strategy: Strategy,
}

impl<'a> BprAgent<'a> {
    pub fn new(kb: &'a KnowledgeBase, strategy: Strategy) -> Result<Self> {
        strategy.validate()?;
        Ok(Self {
            kb,
            belief: kb.prior().clone(),
            strategy,
        })
    }

    pub fn with_belief(mut self, belief: Belief) -> Result<Self> {
        if belief.len() != self.kb.n_types() {
            return Err(BprError::DimensionMismatch {
                expected: self.kb.n_types(),
                actual: belief.len(),
            });
        }
        belief.validate()?;
        self.belief = belief;
        Ok(self)
    }

    pub fn belief(&self) -> &Belief {
        &self.belief
    }
}

impl Selector for BprAgent<'_> {
    fn select(&mut self, t: usize, horizon: usize, rng: &mut dyn RngCore) -> Result<PolicyId> {
        self.strategy.select(self.kb, &self.belief, t, horizon, rng)
    }

    fn observe(&mut self, policy: PolicyId, outcome: &EpisodeOutcome) -> Result<()> {
        self.belief = update_belief(self.kb, &self.belief, policy, &outcome.signal)?;
        Ok(())
    }

    fn entropy(&self) -> Option<f64> {
        Some(self.belief.entropy())
    }
}

/// True expected utility of every domain policy on one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskValues {
    pub values: Vec<f64>,
}

impl TaskValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(BprError::EmptySequence);
        }
        Ok(Self { values })
    }

    /// Closed form when the domain provides one, otherwise Monte Carlo.
    pub fn for_task<D: Domain>(
        domain: &D,
        task: &D::Task,
        episodes: usize,
        seed: u64,
    ) -> Result<Self> {
        match domain.exact_policy_values(task) {
            Some(v) => Self::new(v),
            None => Self::estimate(domain, task, episodes, seed),
        }
    }

    /// Monte Carlo estimate on a dedicated stream.
    pub fn estimate<D: Domain>(
        domain: &D,
        task: &D::Task,
        episodes: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = stream(seed, &[Purpose::Values as u64]);
        Self::new(estimate_policy_values(domain, task, episodes, &mut rng)?)
    }

    pub fn best(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Gap to the best policy of the whole domain.
    pub fn regret(&self, domain_policy: usize) -> f64 {
        self.best() - self.values[domain_policy]
    }

    /// Best value among the policies present in `kb`.
    pub fn library_best(&self, kb: &KnowledgeBase) -> f64 {
        kb.policies()
            .iter()
            .map(|p| self.values[p.domain_index])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    /// 1-based.
    pub episode: usize,
    pub policy: PolicyId,
    pub domain_policy: usize,
    pub utility: f64,
    pub signal: Signal,
    /// Entropy of the belief that chose this episode's policy.
    pub entropy: Option<f64>,
    /// Library regret: gap to the best policy in the knowledge base.
    pub regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub seed: u64,
    pub task_index: u64,
    pub records: Vec<EpisodeRecord>,
}

impl RunTrace {
    pub fn regrets(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.regret).collect()
    }

    pub fn policies(&self) -> Vec<PolicyId> {
        self.records.iter().map(|r| r.policy).collect()
    }
}

/// Identifies the random streams of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSeed {
    pub master: u64,
    pub task_index: u64,
}

/// Runs `episodes` episodes of `agent` on `task`.
pub fn run_episodes<D: Domain, S: Selector + ?Sized>(
    domain: &D,
    kb: &KnowledgeBase,
    task: &D::Task,
    values: &TaskValues,
    agent: &mut S,
    episodes: usize,
    seed: RunSeed,
) -> Result<RunTrace> {
    if episodes == 0 {
        return Err(BprError::InvalidArgument("episodes must be >= 1".into()));
    }
    if kb.signal_kind() != domain.signal_kind() {
        return Err(BprError::InvalidArgument(format!(
            "kb signal {} does not match domain signal {}",
            kb.signal_kind().name(),
            domain.signal_kind().name()
        )));
    }
    if let Some(p) = kb
        .policies()
        .iter()
        .find(|p| p.domain_index >= values.values.len())
    {
        return Err(BprError::DimensionMismatch {
            expected: values.values.len(),
            actual: p.domain_index + 1,
        });
    }
    let best = values.library_best(kb);
    let mut records = Vec::with_capacity(episodes);
    for t in 1..=episodes {
        let entropy = agent.entropy();
        let mut sel_rng = episode_stream(seed.master, seed.task_index, t as u64, Purpose::Select);
        let policy = agent.select(t, episodes, &mut sel_rng)?;
        let domain_policy = kb
            .policies()
            .get(policy.0)
            .ok_or_else(|| BprError::InvalidArgument(format!("policy {policy} not in library")))?
            .domain_index;
        let mut exec_rng = episode_stream(seed.master, seed.task_index, t as u64, Purpose::Execute);
        let outcome = domain.run_episode(task, domain_policy, &mut exec_rng)?;
        agent.observe(policy, &outcome)?;
        records.push(EpisodeRecord {
            episode: t,
            policy,
            domain_policy,
            utility: outcome.utility,
            signal: outcome.signal,
            entropy,
            regret: best - values.values[domain_policy],
        });
    }
    Ok(RunTrace {
        seed: seed.master,
        task_index: seed.task_index,
        records,
    })
}

/// BPR from the kb's prior with the given strategy.
pub fn run_bpr<D: Domain>(
    domain: &D,
    kb: &KnowledgeBase,
    task: &D::Task,
    values: &TaskValues,
    strategy: &Strategy,
    episodes: usize,
    seed: RunSeed,
) -> Result<RunTrace> {
    let mut agent = BprAgent::new(kb, strategy.clone())?;
    run_episodes(domain, kb, task, values, &mut agent, episodes, seed)
}
