//! TOML experiment configuration.

use crate::error::{HarnessError, Result};
use bpr_core::selection::{EntropyMode, ImprovementTarget};
use bpr_core::{PolicyId, Strategy};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub training: TrainingSection,
    pub strategy: Option<StrategySpec>,
    pub compare: Option<CompareSection>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub name: String,
    /// Telephone only: `sas`, `sar` or `u`.
    pub signal: Option<String>,
    /// Surveillance only.
    pub map_seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(default)]
    pub seed: u64,
    /// Episodes per task (`K`); defaults per domain.
    pub episodes: Option<usize>,
    /// Evaluation tasks; defaults per domain.
    pub tasks: Option<usize>,
    #[serde(default = "one")]
    pub library_fraction: f64,
    pub out: Option<PathBuf>,
    /// Pre-trained kb; trained in memory when absent.
    pub kb: Option<PathBuf>,
    /// Monte Carlo episodes for true policy values when no closed form exists.
    #[serde(default = "default_value_episodes")]
    pub value_episodes: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            seed: 0,
            episodes: None,
            tasks: None,
            library_fraction: 1.0,
            out: None,
            kb: None,
            value_episodes: default_value_episodes(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSection {
    #[serde(default = "default_episodes_per_pair")]
    pub episodes_per_pair: usize,
    #[serde(default = "default_alpha")]
    pub smoothing_alpha: f64,
}

impl Default for TrainingSection {
    fn default() -> Self {
        Self {
            episodes_per_pair: default_episodes_per_pair(),
            smoothing_alpha: default_alpha(),
        }
    }
}

/// A named strategy plus optional parameters.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub name: String,
    pub epsilon: Option<f64>,
    pub kappa: Option<f64>,
    pub u_plus: Option<f64>,
    pub u_max: Option<f64>,
    /// `per-signal` or `expected-posterior`.
    pub entropy: Option<String>,
    pub policy: Option<usize>,
    /// Column label; defaults to `name`.
    pub label: Option<String>,
}

impl StrategySpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            epsilon: None,
            kappa: None,
            u_plus: None,
            u_max: None,
            entropy: None,
            policy: None,
            label: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    pub strategies: Vec<StrategySpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub fractions: Vec<f64>,
    pub episodes: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub strategy: Option<StrategySpec>,
}

pub const DEFAULT_EPSILON: f64 = 0.3;

fn one() -> f64 {
    1.0
}
fn default_value_episodes() -> usize {
    bpr_core::runner::DEFAULT_VALUE_EPISODES
}
fn default_episodes_per_pair() -> usize {
    1000
}
fn default_alpha() -> f64 {
    bpr_core::models::DEFAULT_SMOOTHING_ALPHA
}
fn default_trials() -> usize {
    200
}

/// What drives policy choice in a run.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentKind {
    Bpr(Strategy),
    Ucb1,
    GpUcb,
}

/// Resolves a strategy spec against a domain's utility range and type count.
pub fn resolve_strategy(
    spec: &StrategySpec,
    range: (f64, f64),
    n_types: usize,
) -> Result<AgentKind> {
    let (u_min, u_max) = range;
    let kind =
        match spec.name.as_str() {
            "greedy" => AgentKind::Bpr(Strategy::Greedy),
            "eps-greedy" | "epsilon-greedy" => AgentKind::Bpr(Strategy::EpsGreedy {
                epsilon: spec.epsilon.unwrap_or(DEFAULT_EPSILON),
            }),
            "sample" | "sampling" => AgentKind::Bpr(Strategy::SampleBelief),
            "pi" => AgentKind::Bpr(Strategy::ProbabilityOfImprovement {
                target: match spec.u_plus {
                    Some(u) => ImprovementTarget::Fixed(u),
                    None => ImprovementTarget::Midpoint {
                        u_max: spec.u_max.unwrap_or(u_max),
                    },
                },
            }),
            "ei" => AgentKind::Bpr(Strategy::ExpectedImprovement { u_max: spec.u_max }),
            "be" => AgentKind::Bpr(Strategy::BeliefEntropy {
                kappa: spec
                    .kappa
                    .unwrap_or_else(|| bpr_core::selection::default_kappa(u_min, u_max, n_types)),
                mode: match spec.entropy.as_deref() {
                    None | Some("per-signal") => EntropyMode::PerSignal,
                    Some("expected-posterior") => EntropyMode::ExpectedPosterior,
                    Some(other) => {
                        return Err(HarnessError::Config(format!(
                            "unknown entropy mode `{other}`"
                        )))
                    }
                },
            }),
            "kg" => AgentKind::Bpr(Strategy::KnowledgeGradient),
            "fixed" => AgentKind::Bpr(Strategy::Fixed {
                policy: PolicyId(spec.policy.ok_or_else(|| {
                    HarnessError::Config("strategy `fixed` needs `policy`".into())
                })?),
            }),
            "ucb1" => AgentKind::Ucb1,
            "gpucb" | "gp-ucb" => AgentKind::GpUcb,
            other => return Err(HarnessError::Config(format!("unknown strategy `{other}`"))),
        };
    if let AgentKind::Bpr(s) = &kind {
        s.validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
    }
    Ok(kind)
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        match self.domain.name.as_str() {
            "golf" | "surveillance" => {}
            "telephone" => {
                let s = self.domain.signal.as_deref().unwrap_or("u");
                if bpr_core::domains::TelephoneSignal::parse(s).is_none() {
                    return bad(format!("unknown telephone signal `{s}`"));
                }
            }
            other => return bad(format!("unknown domain `{other}`")),
        }
        if self.experiment.episodes == Some(0) {
            return bad("episodes must be >= 1".into());
        }
        if self.experiment.tasks == Some(0) {
            return bad("tasks must be >= 1".into());
        }
        let f = self.experiment.library_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return bad(format!("library_fraction {f} outside (0, 1]"));
        }
        if self.training.episodes_per_pair == 0 {
            return bad("episodes_per_pair must be >= 1".into());
        }
        if let Some(c) = &self.compare {
            if c.strategies.is_empty() {
                return bad("compare.strategies is empty".into());
            }
        }
        if let Some(s) = &self.sweep {
            if s.fractions.is_empty() || s.episodes.is_empty() {
                return bad("sweep grids must be non-empty".into());
            }
            if s.fractions.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
                return bad("sweep fractions must lie in (0, 1]".into());
            }
            if s.episodes.contains(&0) || s.trials == 0 {
                return bad("sweep episodes and trials must be >= 1".into());
            }
        }
        Ok(())
    }

    pub fn episodes(&self) -> usize {
        self.experiment
            .episodes
            .unwrap_or(match self.domain.name.as_str() {
                "golf" => 8,
                "telephone" => 30,
                _ => 50,
            })
    }

    pub fn tasks(&self) -> usize {
        self.experiment
            .tasks
            .unwrap_or(match self.domain.name.as_str() {
                "golf" => 100,
                "telephone" => 1000,
                _ => 10,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_domain_defaults() {
        let cfg = ExperimentConfig::from_toml("[domain]\nname = \"golf\"\n").unwrap();
        assert_eq!(cfg.episodes(), 8);
        assert_eq!(cfg.tasks(), 100);
        assert_eq!(cfg.experiment.library_fraction, 1.0);
    }

    #[test]
    fn unknown_names_are_config_errors() {
        let e = ExperimentConfig::from_toml("[domain]\nname = \"chess\"\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = ExperimentConfig::from_toml("[domain]\nname = \"golf\"\nbogus = 1\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let spec = StrategySpec::named("thompson");
        assert!(resolve_strategy(&spec, (0.0, 1.0), 4).is_err());
    }

    #[test]
    fn strategy_defaults() {
        let k = resolve_strategy(&StrategySpec::named("be"), (-150.0, 0.0), 4).unwrap();
        match k {
            AgentKind::Bpr(Strategy::BeliefEntropy { kappa, mode }) => {
                assert!((kappa - 150.0 / 4f64.ln()).abs() < 1e-12);
                assert_eq!(mode, EntropyMode::PerSignal);
            }
            other => panic!("{other:?}"),
        }
        let k = resolve_strategy(&StrategySpec::named("eps-greedy"), (0.0, 1.0), 4).unwrap();
        assert_eq!(
            k,
            AgentKind::Bpr(Strategy::EpsGreedy {
                epsilon: DEFAULT_EPSILON
            })
        );
    }
}
