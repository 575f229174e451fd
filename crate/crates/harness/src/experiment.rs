//! Domain-generic experiment plumbing: task draws, true values, runs and sweeps.

use crate::config::AgentKind;
use crate::error::{HarnessError, Result};
use bpr_core::baselines::{GpUcbAgent, Ucb1Agent};
use bpr_core::domains::Domain;
use bpr_core::runner::{run_episodes, BprAgent, RunSeed, RunTrace, Selector, TaskValues};
use bpr_core::streams::{derive_seed, stream, Purpose};
use bpr_core::{KnowledgeBase, PolicyId, TypeId};
use rand::seq::SliceRandom;
use rayon::prelude::*;

/// Evaluation task `i`, drawn from its own stream so task sets are shared
/// across strategies and independent of the number of tasks requested.
pub fn sample_tasks<D: Domain>(domain: &D, seed: u64, n: usize) -> Vec<D::Task> {
    (0..n)
        .map(|i| domain.sample_task(&mut stream(seed, &[Purpose::Task as u64, i as u64])))
        .collect()
}

pub fn task_values<D: Domain>(
    domain: &D,
    tasks: &[D::Task],
    mc_episodes: usize,
    seed: u64,
) -> Result<Vec<TaskValues>> {
    tasks
        .par_iter()
        .enumerate()
        .map(|(i, task)| {
            let s = derive_seed(seed, &[Purpose::Values as u64, i as u64]);
            Ok(TaskValues::for_task(domain, task, mc_episodes, s)?)
        })
        .collect()
}

pub fn make_agent<'a>(
    kind: &AgentKind,
    kb: &'a KnowledgeBase,
    range: (f64, f64),
) -> Result<Box<dyn Selector + 'a>> {
    Ok(match kind {
        AgentKind::Bpr(s) => Box::new(BprAgent::new(kb, s.clone())?),
        AgentKind::Ucb1 => Box::new(Ucb1Agent::new(kb, kb.prior(), range)?),
        AgentKind::GpUcb => Box::new(GpUcbAgent::new(kb, range)?),
    })
}

/// Runs every task in parallel; traces come back in task order.
pub fn run_tasks<D: Domain>(
    domain: &D,
    kb: &KnowledgeBase,
    tasks: &[D::Task],
    values: &[TaskValues],
    kind: &AgentKind,
    episodes: usize,
    seed: u64,
) -> Result<Vec<RunTrace>> {
    let range = domain.utility_range();
    tasks
        .par_iter()
        .zip(values)
        .enumerate()
        .map(|(i, (task, v))| {
            let mut agent = make_agent(kind, kb, range)?;
            let run_seed = RunSeed {
                master: seed,
                task_index: i as u64,
            };
            Ok(run_episodes(
                domain,
                kb,
                task,
                v,
                agent.as_mut(),
                episodes,
                run_seed,
            )?)
        })
        .collect()
}

/// Indices of a random library of `round(fraction · n)` entries (at least one),
/// taken as a prefix of `order` so smaller libraries nest inside larger ones.
pub fn library_prefix(order: &[usize], fraction: f64) -> Vec<usize> {
    let n = order.len();
    let m = ((fraction * n as f64).round() as usize).clamp(1, n);
    let mut lib = order[..m].to_vec();
    lib.sort_unstable();
    lib
}

pub fn shuffled_indices(n: usize, seed: u64, keys: &[u64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut keyed = vec![Purpose::Library as u64];
    keyed.extend_from_slice(keys);
    idx.shuffle(&mut stream(seed, &keyed));
    idx
}

/// Keeps the listed types. Policies are kept by the same indices when the
/// library pairs each type with one policy, otherwise all policies stay.
pub fn restrict_library(kb: &KnowledgeBase, types: &[usize]) -> Result<KnowledgeBase> {
    let type_ids: Vec<TypeId> = types.iter().map(|&t| TypeId(t)).collect();
    let policy_ids: Vec<PolicyId> = if kb.n_types() == kb.n_policies() {
        types.iter().map(|&p| PolicyId(p)).collect()
    } else {
        kb.policy_ids().collect()
    };
    Ok(kb.restrict(&type_ids, &policy_ids)?)
}

/// One sweep cell's per-trial average regrets.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub fraction: f64,
    pub episodes: usize,
    pub regrets: Vec<f64>,
}

/// For each trial: one task from the full space and one random library order;
/// every (fraction, K) cell reuses both so cells differ only by the factor swept.
/// Regret is measured against the best policy of the whole domain, so a
/// smaller library is charged for the policies it lacks.
#[allow(clippy::too_many_arguments)]
pub fn sweep<D: Domain>(
    domain: &D,
    kb: &KnowledgeBase,
    kind: &AgentKind,
    fractions: &[f64],
    horizons: &[usize],
    trials: usize,
    mc_episodes: usize,
    seed: u64,
) -> Result<Vec<SweepCell>> {
    if kb.n_types() == 0 {
        return Err(HarnessError::Config("empty knowledge base".into()));
    }
    let tasks = sample_tasks(domain, seed, trials);
    let values = task_values(domain, &tasks, mc_episodes, seed)?;
    let range = domain.utility_range();
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|j| {
            let order = shuffled_indices(kb.n_types(), seed, &[j as u64]);
            let mut row = Vec::with_capacity(fractions.len() * horizons.len());
            for &f in fractions {
                let sub = restrict_library(kb, &library_prefix(&order, f))?;
                for &k in horizons {
                    let mut agent = make_agent(kind, &sub, range)?;
                    let run_seed = RunSeed {
                        master: seed,
                        task_index: j as u64,
                    };
                    let trace = run_episodes(
                        domain,
                        &sub,
                        &tasks[j],
                        &values[j],
                        agent.as_mut(),
                        k,
                        run_seed,
                    )?;
                    let regrets: Vec<f64> = trace
                        .records
                        .iter()
                        .map(|r| values[j].regret(r.domain_policy))
                        .collect();
                    row.push(bpr_core::average_library_regret(&regrets)?);
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut cells = Vec::new();
    let mut c = 0;
    for &f in fractions {
        for &k in horizons {
            cells.push(SweepCell {
                fraction: f,
                episodes: k,
                regrets: per_trial.iter().map(|r| r[c]).collect(),
            });
            c += 1;
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_prefixes_nest() {
        let order = shuffled_indices(68, 5, &[3]);
        let small = library_prefix(&order, 0.25);
        let big = library_prefix(&order, 0.5);
        assert_eq!(small.len(), 17);
        assert_eq!(big.len(), 34);
        assert!(small.iter().all(|i| big.contains(i)));
        assert_eq!(library_prefix(&order, 0.001).len(), 1);
    }
}
