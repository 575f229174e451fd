use serde::{Deserialize, Serialize};

/// One `(s, a, s')` step of an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub state: u32,
    pub action: u32,
    pub next: u32,
}

/// One `(s, a, r)` step of an episode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardStep {
    pub state: u32,
    pub action: u32,
    pub reward: f64,
}

/// Information observed after running a policy for one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Signal {
    TransitionTrace(Vec<Transition>),
    RewardTrace(Vec<RewardStep>),
    EpisodicReturn(f64),
    ScalarReal(f64),
    CategoryBin(usize),
}

/// The class of signal a domain emits and a knowledge base is trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    TransitionTrace,
    RewardTrace,
    EpisodicReturn,
    ScalarReal,
    CategoryBin,
}

impl Signal {
    pub fn kind(&self) -> SignalKind {
        match self {
            Signal::TransitionTrace(_) => SignalKind::TransitionTrace,
            Signal::RewardTrace(_) => SignalKind::RewardTrace,
            Signal::EpisodicReturn(_) => SignalKind::EpisodicReturn,
            Signal::ScalarReal(_) => SignalKind::ScalarReal,
            Signal::CategoryBin(_) => SignalKind::CategoryBin,
        }
    }

    /// Short human-readable rendering used in trace summaries.
    pub fn summary(&self) -> String {
        match self {
            Signal::TransitionTrace(steps) => {
                let mut out = String::from("sas:");
                for (i, t) in steps.iter().enumerate() {
                    if i == 0 {
                        out.push_str(&t.state.to_string());
                    }
                    out.push('>');
                    out.push_str(&t.next.to_string());
                }
                out
            }
            Signal::RewardTrace(steps) => {
                let rewards: Vec<String> = steps.iter().map(|s| s.reward.to_string()).collect();
                format!("sar:{}", rewards.join("|"))
            }
            Signal::EpisodicReturn(u) => format!("u:{u}"),
            Signal::ScalarReal(x) => format!("r:{x}"),
            Signal::CategoryBin(b) => format!("bin:{b}"),
        }
    }
}

impl SignalKind {
    pub fn name(self) -> &'static str {
        match self {
            SignalKind::TransitionTrace => "transition_trace",
            SignalKind::RewardTrace => "reward_trace",
            SignalKind::EpisodicReturn => "episodic_return",
            SignalKind::ScalarReal => "scalar_real",
            SignalKind::CategoryBin => "category_bin",
        }
    }
}

/// Signal and realised utility of a single policy execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub signal: Signal,
    pub utility: f64,
}

impl EpisodeOutcome {
    pub fn new(signal: Signal, utility: f64) -> Self {
        Self { signal, utility }
    }

    /// Outcome whose signal is the episodic return itself.
    pub fn from_return(utility: f64) -> Self {
        Self {
            signal: Signal::EpisodicReturn(utility),
            utility,
        }
    }
}
