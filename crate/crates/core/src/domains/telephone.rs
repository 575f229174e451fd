//! Call-centre personalisation: pick the language model matching an unknown user.
//!
//! From each of `start`, `frustrated` and `annoyed` the user escalates to the
//! next state with probability `η`. Otherwise the call resolves with
//! probability `ρ` or the user hangs up. Escalation is therefore blind to how
//! well the model fits. Reaching `angry` transfers the call to an operator and
//! ends it. Entering `hang_up` or `angry` pays −3,
//! entering `success` pays +10, escalations pay 0, so every call totals either
//! 10 or −3.

use super::{Domain, PerformanceFamily, SignalSpace};
use crate::error::{BprError, Result};
use crate::signal::{EpisodeOutcome, RewardStep, Signal, Transition};
use rand::Rng;

pub const START: u32 = 0;
pub const FRUSTRATED: u32 = 1;
pub const ANNOYED: u32 = 2;
pub const ANGRY: u32 = 3;
pub const HANG_UP: u32 = 4;
pub const SUCCESS: u32 = 5;
pub const N_STATES: usize = 6;
pub const STATE_NAMES: [&str; N_STATES] = [
    "start",
    "frustrated",
    "annoyed",
    "angry",
    "hang_up",
    "success",
];

pub const SUCCESS_REWARD: f64 = 10.0;
pub const FAILURE_REWARD: f64 = -3.0;
pub const REWARD_LEVELS: [f64; 3] = [FAILURE_REWARD, 0.0, SUCCESS_REWARD];

/// Which part of the call the agent observes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TelephoneSignal {
    /// `(s, a, s')` tuples.
    Sas,
    /// `(s, a, r)` tuples.
    Sar,
    /// Total return only.
    U,
}

impl TelephoneSignal {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sas" => Some(Self::Sas),
            "sar" => Some(Self::Sar),
            "u" => Some(Self::U),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sas => "sas",
            Self::Sar => "sar",
            Self::U => "u",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TelephoneDomain {
    /// Number of language models `L`; users and policies are both `1..=L`.
    pub models: usize,
    pub eta: f64,
    pub signal: TelephoneSignal,
}

impl TelephoneDomain {
    pub fn new(signal: TelephoneSignal) -> Self {
        Self {
            models: 20,
            eta: 0.3,
            signal,
        }
    }

    /// `ρ = 1 − |π − λ| / L`, with `π` and `λ` both 1-based.
    pub fn rho(&self, policy: usize, user: usize) -> f64 {
        1.0 - (policy as f64 - user as f64).abs() / self.models as f64
    }

    /// Escalation probability; zero when the model matches the user.
    pub fn eta_for(&self, policy: usize, user: usize) -> f64 {
        if policy == user {
            0.0
        } else {
            self.eta
        }
    }

    /// One call under the given understanding and hang-up parameters.
    pub fn simulate_call<R: Rng + ?Sized>(rho: f64, eta: f64, rng: &mut R) -> Vec<(u32, u32, f64)> {
        let mut steps = Vec::with_capacity(3);
        let mut state = START;
        loop {
            let x: f64 = rng.random();
            let (next, reward) = if x < eta {
                if state == ANNOYED {
                    (ANGRY, FAILURE_REWARD)
                } else {
                    (state + 1, 0.0)
                }
            } else if x < eta + (1.0 - eta) * rho {
                (SUCCESS, SUCCESS_REWARD)
            } else {
                (HANG_UP, FAILURE_REWARD)
            };
            steps.push((state, next, reward));
            if matches!(next, SUCCESS | HANG_UP | ANGRY) {
                return steps;
            }
            state = next;
        }
    }

    /// Probability that a call ends in success.
    pub fn success_probability(rho: f64, eta: f64) -> f64 {
        (1.0 - eta) * rho * (1.0 + eta + eta * eta)
    }

    pub fn outcome_from_steps(&self, steps: &[(u32, u32, f64)]) -> EpisodeOutcome {
        let utility: f64 = steps.iter().map(|s| s.2).sum();
        let signal = match self.signal {
            TelephoneSignal::Sas => Signal::TransitionTrace(
                steps
                    .iter()
                    .map(|(s, n, _)| Transition {
                        state: *s,
                        action: 0,
                        next: *n,
                    })
                    .collect(),
            ),
            TelephoneSignal::Sar => Signal::RewardTrace(
                steps
                    .iter()
                    .map(|(s, _, r)| RewardStep {
                        state: *s,
                        action: 0,
                        reward: *r,
                    })
                    .collect(),
            ),
            TelephoneSignal::U => Signal::EpisodicReturn(utility),
        };
        EpisodeOutcome::new(signal, utility)
    }
}

impl Domain for TelephoneDomain {
    /// User preference `λ ∈ 1..=L`.
    type Task = usize;

    fn name(&self) -> &'static str {
        "telephone"
    }

    fn signal_space(&self) -> SignalSpace {
        match self.signal {
            TelephoneSignal::Sas => SignalSpace::Transitions {
                states: N_STATES,
                actions: 1,
            },
            TelephoneSignal::Sar => SignalSpace::Rewards {
                states: N_STATES,
                actions: 1,
                levels: REWARD_LEVELS.to_vec(),
            },
            TelephoneSignal::U => SignalSpace::Return,
        }
    }

    fn performance_family(&self) -> PerformanceFamily {
        PerformanceFamily::Categorical(vec![SUCCESS_REWARD, FAILURE_REWARD])
    }

    fn type_tasks(&self) -> Vec<(String, usize)> {
        (1..=self.models)
            .map(|l| (format!("lambda_{l}"), l))
            .collect()
    }

    fn policy_names(&self) -> Vec<String> {
        (1..=self.models).map(|p| format!("model_{p}")).collect()
    }

    fn run_episode<R: Rng + ?Sized>(
        &self,
        user: &usize,
        policy: usize,
        rng: &mut R,
    ) -> Result<EpisodeOutcome> {
        if policy >= self.models || *user == 0 || *user > self.models {
            return Err(BprError::DomainFailure(format!(
                "policy {policy} / user {user} outside 1..={}",
                self.models
            )));
        }
        let pi = policy + 1;
        let steps = Self::simulate_call(self.rho(pi, *user), self.eta_for(pi, *user), rng);
        Ok(self.outcome_from_steps(&steps))
    }

    fn exact_policy_values(&self, user: &usize) -> Option<Vec<f64>> {
        Some(
            (1..=self.models)
                .map(|pi| {
                    let p = Self::success_probability(self.rho(pi, *user), self.eta_for(pi, *user));
                    p * SUCCESS_REWARD + (1.0 - p) * FAILURE_REWARD
                })
                .collect(),
        )
    }

    fn sample_task<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(1..=self.models)
    }

    fn utility_range(&self) -> (f64, f64) {
        (FAILURE_REWARD, SUCCESS_REWARD)
    }

    fn describe_task(&self, user: &usize) -> String {
        format!("user model {user}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matching_model_succeeds_immediately() {
        let d = TelephoneDomain::new(TelephoneSignal::Sas);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let out = d.run_episode(&7, 6, &mut rng).unwrap();
            assert_eq!(out.utility, 10.0);
            assert_eq!(
                out.signal,
                Signal::TransitionTrace(vec![Transition {
                    state: START,
                    action: 0,
                    next: SUCCESS
                }])
            );
        }
    }

    #[test]
    fn zero_understanding_never_succeeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let steps = TelephoneDomain::simulate_call(0.0, 0.3, &mut rng);
            let last = steps.last().unwrap();
            assert!(last.1 == HANG_UP || last.1 == ANGRY);
            assert_eq!(steps.iter().map(|s| s.2).sum::<f64>(), -3.0);
        }
    }

    #[test]
    fn reward_trace_hides_failure_cause_at_annoyed() {
        let d = TelephoneDomain::new(TelephoneSignal::Sar);
        let a = d.outcome_from_steps(&[(0, 1, 0.0), (1, 2, 0.0), (2, ANGRY, -3.0)]);
        let b = d.outcome_from_steps(&[(0, 1, 0.0), (1, 2, 0.0), (2, HANG_UP, -3.0)]);
        assert_eq!(a, b);
    }

    #[test]
    fn rho_range() {
        let d = TelephoneDomain::new(TelephoneSignal::U);
        assert_eq!(d.rho(5, 5), 1.0);
        assert!((d.rho(1, 20) - 0.05).abs() < 1e-12);
    }
}
