//! Offline phase: run every library policy on every training type and fit
//! performance and observation models to the results.

use super::{
    storage_size, CategoricalModel, GaussianModel, HistogramModel, ObservationModel,
    PerformanceModel, StorageReport, TraceModel, TraceTarget, DEFAULT_SD_FLOOR,
};
use crate::domains::{Domain, PerformanceFamily, SignalSpace};
use crate::error::{BprError, Result};
use crate::kb::{KnowledgeBase, ModelPair, PolicyInfo, TypeInfo};
use crate::signal::{EpisodeOutcome, Signal};
use crate::streams::{stream, Purpose};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

pub const DEFAULT_SMOOTHING_ALPHA: f64 = 0.01;
pub const DEFAULT_EPISODES_PER_PAIR: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub episodes_per_pair: usize,
    pub smoothing_alpha: f64,
    pub sd_floor: f64,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            episodes_per_pair: DEFAULT_EPISODES_PER_PAIR,
            smoothing_alpha: DEFAULT_SMOOTHING_ALPHA,
            sd_floor: DEFAULT_SD_FLOOR,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub episodes_per_pair: usize,
    /// `[type][policy]` number of episodes fitted.
    pub sample_counts: Vec<Vec<usize>>,
    pub storage: StorageReport,
}

/// Trains on every type and policy of the domain.
pub fn train_offline<D: Domain>(
    domain: &D,
    config: &TrainingConfig,
) -> Result<(KnowledgeBase, TrainingReport)> {
    let types: Vec<usize> = (0..domain.type_tasks().len()).collect();
    let policies: Vec<usize> = (0..domain.n_policies()).collect();
    train_offline_subset(domain, &types, &policies, config)
}

/// Trains on a subset of the domain's types and policies (indices into the
/// domain's own lists). Each pair draws from its own stream keyed by domain
/// indices, so a subset reproduces the matching entries of a full run.
pub fn train_offline_subset<D: Domain>(
    domain: &D,
    types: &[usize],
    policies: &[usize],
    config: &TrainingConfig,
) -> Result<(KnowledgeBase, TrainingReport)> {
    if config.episodes_per_pair == 0 {
        return Err(BprError::InvalidArgument(
            "episodes_per_pair must be at least 1".into(),
        ));
    }
    if !(config.smoothing_alpha > 0.0) {
        return Err(BprError::InvalidArgument(
            "smoothing alpha must be positive".into(),
        ));
    }
    let all_types = domain.type_tasks();
    let policy_names = domain.policy_names();
    for t in types {
        if *t >= all_types.len() {
            return Err(BprError::InvalidArgument(format!("type {t} not in domain")));
        }
    }
    for p in policies {
        if *p >= policy_names.len() {
            return Err(BprError::InvalidArgument(format!(
                "policy {p} not in domain"
            )));
        }
    }
    let space = domain.signal_space();
    let family = domain.performance_family();

    let pairs: Vec<(usize, usize)> = types
        .iter()
        .flat_map(|t| policies.iter().map(move |p| (*t, *p)))
        .collect();
    let fitted: Vec<(ModelPair, Vec<Signal>)> = pairs
        .par_iter()
        .map(|(t, p)| {
            let mut rng = stream(
                config.seed,
                &[Purpose::Training as u64, *t as u64, *p as u64],
            );
            let task = &all_types[*t].1;
            let outcomes: Vec<EpisodeOutcome> = (0..config.episodes_per_pair)
                .map(|_| domain.run_episode(task, *p, &mut rng))
                .collect::<Result<_>>()?;
            fit_pair(&space, &family, config, outcomes)
        })
        .collect::<Result<_>>()?;

    let mut models: Vec<Vec<ModelPair>> = Vec::with_capacity(types.len());
    let mut support: Vec<Vec<Signal>> = vec![Vec::new(); policies.len()];
    let mut seen: Vec<HashSet<String>> = vec![HashSet::new(); policies.len()];
    let mut it = fitted.into_iter();
    for _ in types {
        let mut row = Vec::with_capacity(policies.len());
        for (j, _) in policies.iter().enumerate() {
            let (pair, traces) = it.next().expect("one fit per pair");
            for s in traces {
                let key = serde_json::to_string(&s).expect("signal serialises");
                if seen[j].insert(key) {
                    support[j].push(s);
                }
            }
            row.push(pair);
        }
        models.push(row);
    }

    let kb = KnowledgeBase::with_uniform_prior(
        space.kind(),
        types
            .iter()
            .map(|t| TypeInfo {
                name: all_types[*t].0.clone(),
            })
            .collect(),
        policies
            .iter()
            .map(|p| PolicyInfo {
                name: policy_names[*p].clone(),
                domain_index: *p,
            })
            .collect(),
        models,
    )?;
    let kb = match space {
        SignalSpace::Transitions { .. } | SignalSpace::Rewards { .. } => {
            kb.with_signal_support(support)?
        }
        _ => kb,
    };
    let report = TrainingReport {
        episodes_per_pair: config.episodes_per_pair,
        sample_counts: vec![vec![config.episodes_per_pair; policies.len()]; types.len()],
        storage: storage_size(&kb),
    };
    Ok((kb, report))
}

fn fit_pair(
    space: &SignalSpace,
    family: &PerformanceFamily,
    config: &TrainingConfig,
    outcomes: Vec<EpisodeOutcome>,
) -> Result<(ModelPair, Vec<Signal>)> {
    let utilities: Vec<f64> = outcomes.iter().map(|o| o.utility).collect();
    let performance = match family {
        PerformanceFamily::Gaussian => {
            PerformanceModel::Gaussian(GaussianModel::fit(&utilities, config.sd_floor))
        }
        PerformanceFamily::Categorical(values) => PerformanceModel::Categorical(
            CategoricalModel::fit(values.clone(), config.smoothing_alpha, &utilities).ok_or_else(
                || {
                    BprError::DomainFailure(
                        "utility outside the declared categorical values".into(),
                    )
                },
            )?,
        ),
    };
    let alpha = config.smoothing_alpha;
    let mut traces = Vec::new();
    let observation = match space {
        SignalSpace::Bins(n) => {
            let bins = outcomes
                .iter()
                .map(|o| match o.signal {
                    Signal::CategoryBin(b) if b < *n => Ok(b),
                    ref s => Err(BprError::DomainFailure(format!(
                        "unexpected signal {}",
                        s.summary()
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            ObservationModel::Histogram(HistogramModel::fit(*n, alpha, bins))
        }
        SignalSpace::Scalar => {
            let xs = outcomes
                .iter()
                .map(|o| match o.signal {
                    Signal::ScalarReal(x) => Ok(x),
                    ref s => Err(BprError::DomainFailure(format!(
                        "unexpected signal {}",
                        s.summary()
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            ObservationModel::Gaussian(GaussianModel::fit(&xs, config.sd_floor))
        }
        SignalSpace::Return => {
            for o in &outcomes {
                if o.signal != Signal::EpisodicReturn(o.utility) {
                    return Err(BprError::DomainFailure(
                        "return signal differs from utility".into(),
                    ));
                }
            }
            ObservationModel::SameAsPerformance
        }
        SignalSpace::Transitions { states, actions }
        | SignalSpace::Rewards {
            states, actions, ..
        } => {
            let target = match space {
                SignalSpace::Rewards { levels, .. } => TraceTarget::Reward {
                    levels: levels.clone(),
                },
                _ => TraceTarget::NextState,
            };
            let mut model = TraceModel::new(*states, *actions, target, alpha);
            let mut seen = HashSet::new();
            for o in outcomes {
                model
                    .observe(&o.signal)
                    .map_err(|e| BprError::DomainFailure(e.to_string()))?;
                if seen.insert(serde_json::to_string(&o.signal).expect("signal serialises")) {
                    traces.push(o.signal);
                }
            }
            ObservationModel::Trace(model)
        }
    };
    Ok((
        ModelPair {
            performance,
            observation,
        },
        traces,
    ))
}
