//! Empirical transition and reward models for trace signals.

use crate::error::{BprError, Result};
use crate::signal::{RewardStep, Signal, Transition};
use serde::{Deserialize, Serialize};

/// What a trace model predicts for each `(state, action)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum TraceTarget {
    /// Next state, out of `states` possibilities.
    NextState,
    /// Reward, discretised to the nearest declared level.
    Reward { levels: Vec<f64> },
}

/// Smoothed conditional categorical distributions, one per `(state, action)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceModel {
    pub states: usize,
    pub actions: usize,
    pub target: TraceTarget,
    pub smoothing_alpha: f64,
    /// Flattened `[state][action][outcome]` counts.
    pub counts: Vec<u64>,
}

impl TraceModel {
    pub fn new(states: usize, actions: usize, target: TraceTarget, smoothing_alpha: f64) -> Self {
        assert!(states > 0 && actions > 0);
        assert!(smoothing_alpha > 0.0, "smoothing alpha must be positive");
        let outcomes = match &target {
            TraceTarget::NextState => states,
            TraceTarget::Reward { levels } => {
                assert!(!levels.is_empty(), "reward model needs declared levels");
                levels.len()
            }
        };
        Self {
            states,
            actions,
            target,
            smoothing_alpha,
            counts: vec![0; states * actions * outcomes],
        }
    }

    pub fn outcomes(&self) -> usize {
        match &self.target {
            TraceTarget::NextState => self.states,
            TraceTarget::Reward { levels } => levels.len(),
        }
    }

    fn offset(&self, state: u32, action: u32) -> Result<usize> {
        let (s, a) = (state as usize, action as usize);
        if s >= self.states || a >= self.actions {
            return Err(BprError::SignalOutOfSpace(format!(
                "(state {s}, action {a}) outside {}x{}",
                self.states, self.actions
            )));
        }
        Ok((s * self.actions + a) * self.outcomes())
    }

    fn reward_level(levels: &[f64], reward: f64) -> usize {
        let mut best = 0;
        for (i, l) in levels.iter().enumerate() {
            if (l - reward).abs() < (levels[best] - reward).abs() {
                best = i;
            }
        }
        best
    }

    /// Flat indices (context offset, outcome) of each step of `signal`.
    fn steps(&self, signal: &Signal) -> Result<Vec<(usize, usize)>> {
        match (&self.target, signal) {
            (TraceTarget::NextState, Signal::TransitionTrace(steps)) => steps
                .iter()
                .map(|t: &Transition| {
                    let off = self.offset(t.state, t.action)?;
                    if t.next as usize >= self.states {
                        return Err(BprError::SignalOutOfSpace(format!(
                            "next state {} outside {}",
                            t.next, self.states
                        )));
                    }
                    Ok((off, t.next as usize))
                })
                .collect(),
            (TraceTarget::Reward { levels }, Signal::RewardTrace(steps)) => steps
                .iter()
                .map(|r: &RewardStep| {
                    let off = self.offset(r.state, r.action)?;
                    Ok((off, Self::reward_level(levels, r.reward)))
                })
                .collect(),
            (TraceTarget::NextState, other) => Err(BprError::FamilyMismatch {
                expected: "transition_trace",
                actual: other.kind().name(),
            }),
            (TraceTarget::Reward { .. }, other) => Err(BprError::FamilyMismatch {
                expected: "reward_trace",
                actual: other.kind().name(),
            }),
        }
    }

    pub fn observe(&mut self, signal: &Signal) -> Result<()> {
        for (off, o) in self.steps(signal)? {
            self.counts[off + o] += 1;
        }
        Ok(())
    }

    /// Smoothed conditional probability of `outcome` at the context starting at `off`.
    fn conditional(&self, off: usize, outcome: usize) -> f64 {
        let n = self.outcomes();
        let row = &self.counts[off..off + n];
        let total: u64 = row.iter().sum();
        (row[outcome] as f64 + self.smoothing_alpha)
            / (total as f64 + self.smoothing_alpha * n as f64)
    }

    pub fn conditional_probability(&self, state: u32, action: u32, outcome: usize) -> Result<f64> {
        let off = self.offset(state, action)?;
        if outcome >= self.outcomes() {
            return Err(BprError::SignalOutOfSpace(format!("outcome {outcome}")));
        }
        Ok(self.conditional(off, outcome))
    }

    /// Sum of per-step log conditional probabilities; zero for an empty trace.
    pub fn log_likelihood(&self, signal: &Signal) -> Result<f64> {
        Ok(self
            .steps(signal)?
            .into_iter()
            .map(|(off, o)| self.conditional(off, o).ln())
            .sum())
    }
}
