use libm::erfc;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

pub const DEFAULT_SD_FLOOR: f64 = 1e-3;

/// Normal distribution fitted to utility or signal samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    pub mean: f64,
    pub sd: f64,
}

impl GaussianModel {
    pub fn new(mean: f64, sd: f64) -> Self {
        assert!(sd > 0.0, "standard deviation must be positive");
        Self { mean, sd }
    }

    /// Sample mean and Bessel-corrected standard deviation, floored at `sd_floor`.
    pub fn fit(samples: &[f64], sd_floor: f64) -> Self {
        assert!(!samples.is_empty(), "cannot fit a Gaussian to no samples");
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            sd: var.sqrt().max(sd_floor),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sd;
        -0.5 * z * z - self.sd.ln() - 0.5 * (2.0 * PI).ln()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        normal_cdf((x - self.mean) / self.sd)
    }
}

/// Standard normal CDF through `erfc` for accuracy in the lower tail.
pub fn normal_cdf(z: f64) -> f64 {
    if z == f64::INFINITY {
        return 1.0;
    }
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-z / SQRT_2)
}
