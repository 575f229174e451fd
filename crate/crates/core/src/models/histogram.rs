use serde::{Deserialize, Serialize};

/// Laplace-smoothed categorical distribution over a fixed set of bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramModel {
    pub counts: Vec<u64>,
    pub smoothing_alpha: f64,
}

impl HistogramModel {
    pub fn new(bins: usize, smoothing_alpha: f64) -> Self {
        assert!(bins > 0, "histogram needs at least one bin");
        assert!(
            smoothing_alpha >= 0.0,
            "smoothing alpha must be non-negative"
        );
        Self {
            counts: vec![0; bins],
            smoothing_alpha,
        }
    }

    pub fn fit(
        bins: usize,
        smoothing_alpha: f64,
        samples: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut h = Self::new(bins, smoothing_alpha);
        for s in samples {
            h.counts[s] += 1;
        }
        h
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(count + α) / (n + α · bins)`, or `None` outside the bin range.
    /// An empty unsmoothed histogram is uniform.
    pub fn probability(&self, bin: usize) -> Option<f64> {
        let c = *self.counts.get(bin)?;
        let denom = self.total() as f64 + self.smoothing_alpha * self.bins() as f64;
        if denom == 0.0 {
            return Some(1.0 / self.bins() as f64);
        }
        Some((c as f64 + self.smoothing_alpha) / denom)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.bins())
            .map(|b| self.probability(b).unwrap())
            .collect()
    }

    pub fn mode(&self) -> usize {
        crate::ids::argmax(self.counts.iter().map(|c| *c as f64)).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_equal_bins() {
        let h = HistogramModel::fit(2, 1.0, [0, 1]);
        assert_eq!(h.probability(0), Some(0.5));
        assert_eq!(h.probability(1), Some(0.5));
        assert_eq!(h.probability(2), None);
    }

    #[test]
    fn probabilities_sum_to_one_and_stay_positive() {
        let h = HistogramModel::fit(7, 0.01, [3, 3, 3, 4, 2, 3]);
        let p = h.probabilities();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let floor = 0.01 / (6.0 + 0.07);
        assert!(p.iter().all(|x| *x >= floor - 1e-18));
        assert_eq!(h.mode(), 3);
    }

    #[test]
    fn fit_is_order_independent() {
        let a = HistogramModel::fit(4, 0.5, [0, 1, 1, 3]);
        let b = HistogramModel::fit(4, 0.5, [3, 1, 0, 1]);
        assert_eq!(a, b);
    }
}
