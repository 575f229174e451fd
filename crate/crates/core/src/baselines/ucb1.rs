use super::rescale;
use crate::belief::Belief;
use crate::error::{BprError, Result};
use crate::ids::{argmax, PolicyId};
use crate::kb::KnowledgeBase;
use crate::runner::Selector;
use crate::signal::EpisodeOutcome;
use rand::RngCore;

/// UCB1 whose arms start with one virtual pull at their prior mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Ucb1State {
    pub counts: Vec<u64>,
    pub means: Vec<f64>,
    pub total: u64,
}

impl Ucb1State {
    /// Prior means must already be rescaled to `[0, 1]`.
    pub fn with_prior(prior_means: Vec<f64>) -> Self {
        let n = prior_means.len();
        Self {
            counts: vec![1; n],
            means: prior_means,
            total: n as u64,
        }
    }

    pub fn index(&self, arm: usize) -> f64 {
        let t = self.total.max(1) as f64;
        self.means[arm] + (2.0 * t.ln() / self.counts[arm] as f64).sqrt()
    }

    pub fn select(&self) -> PolicyId {
        PolicyId(argmax((0..self.means.len()).map(|a| self.index(a))).expect("no arms"))
    }

    pub fn update(&mut self, arm: PolicyId, reward: f64) {
        let a = arm.0;
        self.counts[a] += 1;
        self.total += 1;
        self.means[a] += (reward - self.means[a]) / self.counts[a] as f64;
    }
}

/// UCB1 over a knowledge base's library, seeded with prior expected performance.
pub struct Ucb1Agent {
    state: Ucb1State,
    range: (f64, f64),
}

impl Ucb1Agent {
    pub fn new(kb: &KnowledgeBase, prior: &Belief, range: (f64, f64)) -> Result<Self> {
        if prior.len() != kb.n_types() {
            return Err(BprError::DimensionMismatch {
                expected: kb.n_types(),
                actual: prior.len(),
            });
        }
        let means = kb
            .expected_utilities(prior)
            .into_iter()
            .map(|u| rescale(u, range))
            .collect();
        Ok(Self {
            state: Ucb1State::with_prior(means),
            range,
        })
    }

    pub fn state(&self) -> &Ucb1State {
        &self.state
    }
}

impl Selector for Ucb1Agent {
    fn select(&mut self, _t: usize, _horizon: usize, _rng: &mut dyn RngCore) -> Result<PolicyId> {
        Ok(self.state.select())
    }

    fn observe(&mut self, policy: PolicyId, outcome: &EpisodeOutcome) -> Result<()> {
        self.state
            .update(policy, rescale(outcome.utility, self.range));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpulled_arms_follow_prior() {
        let s = Ucb1State::with_prior(vec![0.2, 0.7, 0.4]);
        assert_eq!(s.select(), PolicyId(1));
    }

    #[test]
    fn update_touches_only_pulled_arm() {
        let mut s = Ucb1State::with_prior(vec![0.2, 0.7, 0.4]);
        let before = s.clone();
        s.update(PolicyId(2), 1.0);
        assert_eq!(s.counts[0], before.counts[0]);
        assert_eq!(s.means[0], before.means[0]);
        assert_eq!(s.counts[1], before.counts[1]);
        assert_eq!(s.means[1], before.means[1]);
        assert_eq!(s.counts[2], 2);
        assert_eq!(s.means[2], 0.7);
        assert_eq!(s.total, before.total + 1);
    }

    #[test]
    fn deterministic_rewards_concentrate_on_best_arm() {
        let mut s = Ucb1State::with_prior(vec![0.5, 0.5]);
        let mut pulls = [0usize; 2];
        for _ in 0..10_000 {
            let a = s.select();
            pulls[a.0] += 1;
            s.update(a, if a.0 == 1 { 1.0 } else { 0.0 });
        }
        assert!(pulls[1] as f64 / 10_000.0 > 0.99);
    }

    #[test]
    fn counts_sum_to_total() {
        let mut s = Ucb1State::with_prior(vec![0.1, 0.9, 0.3, 0.3]);
        for i in 0..50 {
            let a = s.select();
            s.update(a, (i % 3) as f64 / 2.0);
        }
        assert_eq!(s.counts.iter().sum::<u64>(), s.total);
    }
}
