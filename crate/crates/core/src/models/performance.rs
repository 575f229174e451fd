use super::categorical::CategoricalModel;
use super::gaussian::GaussianModel;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Distribution over the utility of one policy on one type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PerformanceModel {
    Gaussian(GaussianModel),
    Categorical(CategoricalModel),
}

impl PerformanceModel {
    pub fn mean(&self) -> f64 {
        match self {
            PerformanceModel::Gaussian(g) => g.mean,
            PerformanceModel::Categorical(c) => c.mean(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            PerformanceModel::Gaussian(g) => g.sd * g.sd,
            PerformanceModel::Categorical(c) => {
                let mean = c.mean();
                (0..c.values.len())
                    .map(|i| c.probability_at(i) * (c.values[i] - mean).powi(2))
                    .sum()
            }
        }
    }

    pub fn cdf(&self, u: f64) -> f64 {
        match self {
            PerformanceModel::Gaussian(g) => g.cdf(u),
            PerformanceModel::Categorical(c) => c.cdf(u),
        }
    }

    /// Density for continuous families, probability mass for discrete ones.
    pub fn density(&self, u: f64) -> f64 {
        match self {
            PerformanceModel::Gaussian(g) => g.density(u),
            PerformanceModel::Categorical(c) => c.probability(u).unwrap_or(0.0),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            PerformanceModel::Gaussian(g) => Normal::new(g.mean, g.sd).unwrap().sample(rng),
            PerformanceModel::Categorical(c) => {
                let x: f64 = rng.random();
                let mut acc = 0.0;
                for i in 0..c.values.len() {
                    acc += c.probability_at(i);
                    if x < acc {
                        return c.values[i];
                    }
                }
                *c.values.last().unwrap()
            }
        }
    }

    pub fn as_gaussian(&self) -> Option<&GaussianModel> {
        match self {
            PerformanceModel::Gaussian(g) => Some(g),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussian_mean_matches_quadrature_of_cdf() {
        // E[U] = ∫_0^∞ (1 - F) du - ∫_{-∞}^0 F du
        let m = PerformanceModel::Gaussian(GaussianModel::new(1.5, 2.0));
        let h = 1e-3;
        let pos: f64 = (0..30_000)
            .map(|i| (1.0 - m.cdf((i as f64 + 0.5) * h)) * h)
            .sum();
        let neg: f64 = (0..30_000).map(|i| m.cdf(-(i as f64 + 0.5) * h) * h).sum();
        assert!((pos - neg - m.mean()).abs() < 1e-6);
    }

    #[test]
    fn categorical_sampling_frequencies() {
        let c = CategoricalModel::fit(vec![10.0, -3.0], 0.0, &[10.0, -3.0, -3.0, -3.0]).unwrap();
        let m = PerformanceModel::Categorical(c);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let hits = (0..n).filter(|_| m.sample(&mut rng) == 10.0).count();
        assert!((hits as f64 / n as f64 - 0.25).abs() < 0.01);
    }
}
