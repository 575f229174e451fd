//! Bayesian policy reuse: pick a pre-learnt policy for an unknown task by
//! maintaining a belief over previously solved task types.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod belief;
pub mod domains;
pub mod error;
pub mod ids;
pub mod kb;
pub mod models;
pub mod quadrature;
pub mod regret;
pub mod runner;
pub mod selection;
pub mod signal;
pub mod streams;

pub use belief::{belief_entropy, Belief};
pub use error::{BprError, Result};
pub use ids::{PolicyId, TypeId};
pub use kb::{expected_utility, update_belief, KnowledgeBase, ModelPair, PolicyInfo, TypeInfo};
pub use regret::{average_library_regret, epsilon_equivalent, library_regret};
pub use runner::{run_bpr, run_episodes, BprAgent, RunSeed, RunTrace, Selector, TaskValues};
pub use selection::Strategy;
pub use signal::{EpisodeOutcome, Signal, SignalKind};
