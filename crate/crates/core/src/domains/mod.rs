//! Simulated evaluation environments.

pub mod golf;
pub mod surveillance;
pub mod telephone;

pub use golf::GolfDomain;
pub use surveillance::{generate_surveillance_map, SurveillanceDomain, SurveillanceMap};
pub use telephone::{TelephoneDomain, TelephoneSignal};

use crate::error::Result;
use crate::signal::{EpisodeOutcome, SignalKind};
use rand::Rng;

/// Shape of the signals a domain emits, which fixes the observation-model family.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpace {
    Bins(usize),
    Transitions {
        states: usize,
        actions: usize,
    },
    Rewards {
        states: usize,
        actions: usize,
        levels: Vec<f64>,
    },
    Return,
    Scalar,
}

impl SignalSpace {
    pub fn kind(&self) -> SignalKind {
        match self {
            SignalSpace::Bins(_) => SignalKind::CategoryBin,
            SignalSpace::Transitions { .. } => SignalKind::TransitionTrace,
            SignalSpace::Rewards { .. } => SignalKind::RewardTrace,
            SignalSpace::Return => SignalKind::EpisodicReturn,
            SignalSpace::Scalar => SignalKind::ScalarReal,
        }
    }
}

/// Family used to fit performance models.
#[derive(Debug, Clone, PartialEq)]
pub enum PerformanceFamily {
    Gaussian,
    /// Utilities take only these values.
    Categorical(Vec<f64>),
}

/// An environment with a finite set of training types and a policy library.
///
/// Episode execution must be a pure function of `(task, policy, rng draws)`.
pub trait Domain: Sync {
    type Task: Clone + Send + Sync + std::fmt::Debug;

    fn name(&self) -> &'static str;

    fn signal_space(&self) -> SignalSpace;

    fn performance_family(&self) -> PerformanceFamily;

    /// Representative task of each previously-solved type, with a label.
    fn type_tasks(&self) -> Vec<(String, Self::Task)>;

    fn policy_names(&self) -> Vec<String>;

    fn run_episode<R: Rng + ?Sized>(
        &self,
        task: &Self::Task,
        policy: usize,
        rng: &mut R,
    ) -> Result<EpisodeOutcome>;

    /// Draws a task for online evaluation.
    fn sample_task<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Task;

    /// Configured `(U_min, U_max)`, used for rescaling and heuristic defaults.
    fn utility_range(&self) -> (f64, f64);

    fn describe_task(&self, task: &Self::Task) -> String;

    /// Closed-form `E[U]` of every policy on `task`, when the domain has one.
    fn exact_policy_values(&self, _task: &Self::Task) -> Option<Vec<f64>> {
        None
    }

    fn signal_kind(&self) -> SignalKind {
        self.signal_space().kind()
    }

    fn n_policies(&self) -> usize {
        self.policy_names().len()
    }
}

/// Monte Carlo estimate of `E[U]` of every policy on `task`.
pub fn estimate_policy_values<D: Domain, R: Rng + ?Sized>(
    domain: &D,
    task: &D::Task,
    episodes: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    (0..domain.n_policies())
        .map(|p| {
            let mut total = 0.0;
            for _ in 0..episodes {
                total += domain.run_episode(task, p, rng)?.utility;
            }
            Ok(total / episodes as f64)
        })
        .collect()
}
