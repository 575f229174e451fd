//! Enumeration of the signals a policy may emit under the current belief.
//!
//! Discrete signal spaces are enumerated exactly. Trace spaces enumerate the
//! traces seen in training plus one residual class holding the remaining mass.
//! Gaussian signal spaces use Gauss–Hermite nodes per mixture component.

use crate::belief::Belief;
use crate::error::{BprError, Result};
use crate::ids::{PolicyId, TypeId};
use crate::kb::KnowledgeBase;
use crate::models::{GaussianModel, ObservationModel, PerformanceModel};
use crate::quadrature::GaussHermite;
use crate::signal::Signal;

/// Types whose weight is below this are ignored in continuous lookahead.
pub const CONTINUOUS_PRUNE: f64 = 1e-12;

/// Types carrying belief mass, in compact form.
#[derive(Debug, Clone)]
pub(crate) struct Active {
    pub idx: Vec<usize>,
    pub w: Vec<f64>,
}

impl Active {
    fn select(belief: &Belief, threshold: f64) -> Self {
        let (idx, w) = belief
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > threshold)
            .map(|(i, w)| (i, *w))
            .unzip();
        Active { idx, w }
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }
}

enum Space {
    Discrete {
        signals: Vec<Signal>,
        residual: bool,
    },
    Gaussian,
}

fn space(kb: &KnowledgeBase, policy: PolicyId) -> Result<Space> {
    let first = kb.pair(TypeId(0), policy);
    Ok(match (&first.observation, &first.performance) {
        (ObservationModel::Histogram(h), _) => Space::Discrete {
            signals: (0..h.bins()).map(Signal::CategoryBin).collect(),
            residual: false,
        },
        (ObservationModel::Gaussian(_), _)
        | (ObservationModel::SameAsPerformance, PerformanceModel::Gaussian(_)) => Space::Gaussian,
        (ObservationModel::SameAsPerformance, PerformanceModel::Categorical(_)) => {
            let mut values: Vec<f64> = Vec::new();
            for t in kb.type_ids() {
                if let PerformanceModel::Categorical(c) = kb.performance(t, policy) {
                    for v in &c.values {
                        if !values.contains(v) {
                            values.push(*v);
                        }
                    }
                }
            }
            Space::Discrete {
                signals: values.into_iter().map(Signal::EpisodicReturn).collect(),
                residual: false,
            }
        }
        (ObservationModel::Trace(_), _) => {
            let support = kb.signal_support().ok_or_else(|| {
                BprError::InvalidArgument("trace knowledge base has no signal support".into())
            })?;
            Space::Discrete {
                signals: support[policy.0].clone(),
                residual: true,
            }
        }
    })
}

fn likelihood_or_zero(
    kb: &KnowledgeBase,
    t: usize,
    policy: PolicyId,
    signal: &Signal,
) -> Result<f64> {
    let pair = kb.pair(TypeId(t), policy);
    match pair.observation.likelihood(&pair.performance, signal) {
        Ok(l) => Ok(l),
        Err(BprError::SignalOutOfSpace(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Types taking part in the look-ahead for `policy`.
pub(crate) fn active_types(
    kb: &KnowledgeBase,
    belief: &Belief,
    policy: PolicyId,
) -> Result<Active> {
    Ok(match space(kb, policy)? {
        Space::Discrete { .. } => Active::select(belief, 0.0),
        Space::Gaussian => Active::select(belief, CONTINUOUS_PRUNE),
    })
}

/// Calls `visit(weight, likelihoods, posterior)` for every signal outcome of
/// `policy`, where `weight` is the outcome's predictive probability under the
/// belief restricted to `active`, and both slices are indexed like `active`.
pub(crate) fn for_each_outcome(
    kb: &KnowledgeBase,
    active: &Active,
    policy: PolicyId,
    mut visit: impl FnMut(f64, &[f64], &[f64]),
) -> Result<()> {
    match space(kb, policy)? {
        Space::Discrete { signals, residual } => {
            let n = active.len();
            let mut lik = vec![0.0; n];
            let mut post = vec![0.0; n];
            let mut covered = vec![0.0; n];
            let mut emit = |lik: &[f64], post: &mut [f64]| {
                let m: f64 = lik.iter().zip(&active.w).map(|(l, w)| l * w).sum();
                if m > 0.0 {
                    for a in 0..n {
                        post[a] = active.w[a] * lik[a] / m;
                    }
                    visit(m, lik, post);
                }
            };
            for s in &signals {
                for a in 0..n {
                    lik[a] = likelihood_or_zero(kb, active.idx[a], policy, s)?;
                    covered[a] += lik[a];
                }
                emit(&lik, &mut post);
            }
            if residual {
                for a in 0..n {
                    lik[a] = (1.0 - covered[a]).max(0.0);
                }
                emit(&lik, &mut post);
            }
            Ok(())
        }
        Space::Gaussian => {
            let n = active.len();
            let models: Vec<GaussianModel> = active
                .idx
                .iter()
                .map(|t| {
                    let pair = kb.pair(TypeId(*t), policy);
                    pair.observation
                        .continuous_gaussian(&pair.performance)
                        .copied()
                        .ok_or_else(|| BprError::InvalidArgument("mixed signal families".into()))
                })
                .collect::<Result<_>>()?;
            let rule = GaussHermite::default_rule();
            let mut lik = vec![0.0; n];
            let mut post = vec![0.0; n];
            for c in 0..n {
                for (sigma, omega) in rule.normal_points(models[c].mean, models[c].sd) {
                    let mut m = 0.0;
                    for a in 0..n {
                        lik[a] = models[a].density(sigma);
                        m += active.w[a] * lik[a];
                    }
                    if !(m > 0.0) {
                        continue;
                    }
                    for a in 0..n {
                        post[a] = active.w[a] * lik[a] / m;
                    }
                    visit(active.w[c] * omega, &lik, &post);
                }
            }
            Ok(())
        }
    }
}
