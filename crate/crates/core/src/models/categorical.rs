use serde::{Deserialize, Serialize};

/// Laplace-smoothed distribution over a declared finite set of utility values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalModel {
    pub values: Vec<f64>,
    pub counts: Vec<u64>,
    pub smoothing_alpha: f64,
}

impl CategoricalModel {
    pub fn new(values: Vec<f64>, smoothing_alpha: f64) -> Self {
        assert!(
            !values.is_empty(),
            "categorical model needs at least one value"
        );
        assert!(
            smoothing_alpha >= 0.0,
            "smoothing alpha must be non-negative"
        );
        let counts = vec![0; values.len()];
        Self {
            values,
            counts,
            smoothing_alpha,
        }
    }

    /// Point mass at a single value.
    pub fn point_mass(value: f64) -> Self {
        Self {
            values: vec![value],
            counts: vec![1],
            smoothing_alpha: 0.0,
        }
    }

    /// Counts each sample against the declared values; `None` if a sample is undeclared.
    pub fn fit(values: Vec<f64>, smoothing_alpha: f64, samples: &[f64]) -> Option<Self> {
        let mut m = Self::new(values, smoothing_alpha);
        for s in samples {
            let i = m.index_of(*s)?;
            m.counts[i] += 1;
        }
        Some(m)
    }

    pub fn index_of(&self, value: f64) -> Option<usize> {
        self.values.iter().position(|v| *v == value)
    }

    fn denominator(&self) -> f64 {
        self.counts.iter().sum::<u64>() as f64 + self.smoothing_alpha * self.values.len() as f64
    }

    pub fn probability_at(&self, index: usize) -> f64 {
        (self.counts[index] as f64 + self.smoothing_alpha) / self.denominator()
    }

    pub fn probability(&self, value: f64) -> Option<f64> {
        self.index_of(value).map(|i| self.probability_at(i))
    }

    pub fn mean(&self) -> f64 {
        (0..self.values.len())
            .map(|i| self.values[i] * self.probability_at(i))
            .sum()
    }

    pub fn cdf(&self, u: f64) -> f64 {
        (0..self.values.len())
            .filter(|i| self.values[*i] <= u)
            .map(|i| self.probability_at(i))
            .sum::<f64>()
            .min(1.0)
    }
}
