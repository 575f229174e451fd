use super::rescale;
use crate::error::{BprError, Result};
use crate::ids::{argmax, PolicyId};
use crate::kb::KnowledgeBase;
use crate::runner::Selector;
use crate::signal::EpisodeOutcome;
use nalgebra::{Cholesky, DMatrix, DVector};
use rand::RngCore;

pub const DEFAULT_DELTA: f64 = 0.1;
const JITTER: f64 = 1e-8;

/// GP-UCB over a finite policy set with a fixed kernel matrix.
#[derive(Debug, Clone)]
pub struct GpUcbState {
    kernel: DMatrix<f64>,
    noise_var: f64,
    prior_mean: f64,
    delta: f64,
    observations: Vec<(usize, f64)>,
}

impl GpUcbState {
    pub fn new(kernel: DMatrix<f64>, noise_var: f64) -> Result<Self> {
        if !kernel.is_square() {
            return Err(BprError::InvalidArgument("kernel must be square".into()));
        }
        if kernel.nrows() == 0 {
            return Err(BprError::InvalidArgument("kernel must be non-empty".into()));
        }
        if !(noise_var >= 0.0) {
            return Err(BprError::InvalidArgument(
                "noise variance must be >= 0".into(),
            ));
        }
        Ok(Self {
            kernel,
            noise_var,
            prior_mean: 0.0,
            delta: DEFAULT_DELTA,
            observations: Vec::new(),
        })
    }

    pub fn with_prior_mean(mut self, m: f64) -> Self {
        self.prior_mean = m;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// RBF kernel over per-policy vectors of rescaled mean training utilities.
    /// Length scale is the median pairwise distance; noise is the mean
    /// per-pair outcome variance.
    pub fn from_training(kb: &KnowledgeBase, range: (f64, f64)) -> Result<Self> {
        let n = kb.n_policies();
        let span = range.1 - range.0;
        let vecs: Vec<Vec<f64>> = (0..n)
            .map(|p| {
                kb.type_ids()
                    .map(|t| rescale(kb.mean(t, PolicyId(p)), range))
                    .collect()
            })
            .collect();
        let dist = |a: &[f64], b: &[f64]| -> f64 {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let mut pairwise: Vec<f64> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairwise.push(dist(&vecs[i], &vecs[j]));
            }
        }
        pairwise.sort_by(f64::total_cmp);
        let median = match pairwise.len() {
            0 => 1.0,
            m if m % 2 == 1 => pairwise[m / 2],
            m => 0.5 * (pairwise[m / 2 - 1] + pairwise[m / 2]),
        };
        let ell = if median > 0.0 { median } else { 1.0 };
        let kernel = DMatrix::from_fn(n, n, |i, j| {
            (-dist(&vecs[i], &vecs[j]).powi(2) / (2.0 * ell * ell)).exp()
        });

        let mut var_sum = 0.0;
        let mut var_n = 0usize;
        let mut mean_sum = 0.0;
        for t in kb.type_ids() {
            for p in kb.policy_ids() {
                var_sum += kb.performance(t, p).variance() / (span * span);
                mean_sum += rescale(kb.mean(t, p), range);
                var_n += 1;
            }
        }
        let noise = if var_n > 0 {
            var_sum / var_n as f64
        } else {
            0.0
        };
        let prior_mean = if var_n > 0 {
            mean_sum / var_n as f64
        } else {
            0.0
        };
        Ok(Self::new(kernel, noise.max(1e-6))?.with_prior_mean(prior_mean))
    }

    pub fn n_policies(&self) -> usize {
        self.kernel.nrows()
    }

    pub fn observations(&self) -> &[(usize, f64)] {
        &self.observations
    }

    pub fn update(&mut self, policy: PolicyId, reward: f64) {
        self.observations.push((policy.0, reward));
    }

    fn factor(&self) -> Result<Option<Cholesky<f64, nalgebra::Dyn>>> {
        let m = self.observations.len();
        if m == 0 {
            return Ok(None);
        }
        let gram = DMatrix::from_fn(m, m, |a, b| {
            let k = self.kernel[(self.observations[a].0, self.observations[b].0)];
            if a == b {
                k + self.noise_var
            } else {
                k
            }
        });
        if let Some(c) = Cholesky::new(gram.clone()) {
            return Ok(Some(c));
        }
        let jittered = gram + DMatrix::identity(m, m) * JITTER;
        Cholesky::new(jittered)
            .map(Some)
            .ok_or(BprError::SingularKernel)
    }

    /// Posterior mean and standard deviation at every policy.
    pub fn posterior(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n_policies();
        let Some(chol) = self.factor()? else {
            let sd = (0..n)
                .map(|i| self.kernel[(i, i)].max(0.0).sqrt())
                .collect();
            return Ok((vec![self.prior_mean; n], sd));
        };
        let m = self.observations.len();
        let y = DVector::from_iterator(
            m,
            self.observations.iter().map(|&(_, r)| r - self.prior_mean),
        );
        let alpha = chol.solve(&y);
        let l = chol.l();
        let mut means = Vec::with_capacity(n);
        let mut sds = Vec::with_capacity(n);
        for x in 0..n {
            let kx = DVector::from_iterator(
                m,
                self.observations.iter().map(|&(p, _)| self.kernel[(x, p)]),
            );
            means.push(self.prior_mean + kx.dot(&alpha));
            let v = l
                .solve_lower_triangular(&kx)
                .ok_or(BprError::SingularKernel)?;
            let var = self.kernel[(x, x)] - v.dot(&v);
            sds.push(var.max(0.0).sqrt());
        }
        Ok((means, sds))
    }

    pub fn beta(&self, t: usize) -> f64 {
        let n = self.n_policies() as f64;
        let t = t.max(1) as f64;
        2.0 * (n * t * t * std::f64::consts::PI.powi(2) / (6.0 * self.delta)).ln()
    }

    pub fn select(&self, t: usize) -> Result<PolicyId> {
        let (mu, sd) = self.posterior()?;
        let b = self.beta(t).max(0.0).sqrt();
        Ok(PolicyId(
            argmax(mu.iter().zip(&sd).map(|(m, s)| m + b * s)).expect("non-empty"),
        ))
    }
}

/// GP-UCB agent acting on rescaled utilities.
pub struct GpUcbAgent {
    state: GpUcbState,
    range: (f64, f64),
}

impl GpUcbAgent {
    pub fn new(kb: &KnowledgeBase, range: (f64, f64)) -> Result<Self> {
        Ok(Self {
            state: GpUcbState::from_training(kb, range)?,
            range,
        })
    }

    pub fn state(&self) -> &GpUcbState {
        &self.state
    }
}

impl Selector for GpUcbAgent {
    fn select(&mut self, t: usize, _horizon: usize, _rng: &mut dyn RngCore) -> Result<PolicyId> {
        self.state.select(t)
    }

    fn observe(&mut self, policy: PolicyId, outcome: &EpisodeOutcome) -> Result<()> {
        self.state
            .update(policy, rescale(outcome.utility, self.range));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel3() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.2, 0.5, 2.0, 0.3, 0.2, 0.3, 1.5])
    }

    #[test]
    fn no_observations_picks_largest_prior_sd() {
        let gp = GpUcbState::new(kernel3(), 0.1).unwrap();
        assert_eq!(gp.select(1).unwrap(), PolicyId(1));
        let flat = GpUcbState::new(DMatrix::identity(3, 3), 0.1).unwrap();
        assert_eq!(flat.select(1).unwrap(), PolicyId(0));
    }

    #[test]
    fn interpolates_at_low_noise() {
        let mut gp = GpUcbState::new(kernel3(), 1e-6).unwrap();
        gp.update(PolicyId(2), 0.42);
        let (mu, sd) = gp.posterior().unwrap();
        assert!((mu[2] - 0.42).abs() < 1e-4);
        assert!(sd[2] < 1e-2);
    }

    #[test]
    fn identical_columns_give_identical_posteriors() {
        let k = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.4, 1.0, 1.0, 0.4, 0.4, 0.4, 1.0]);
        let mut gp = GpUcbState::new(k, 0.01).unwrap();
        gp.update(PolicyId(2), 0.8);
        gp.update(PolicyId(0), 0.3);
        let (mu, sd) = gp.posterior().unwrap();
        assert!((mu[0] - mu[1]).abs() < 1e-9);
        assert!((sd[0] - sd[1]).abs() < 1e-9);
    }

    #[test]
    fn variance_shrinks_with_observations() {
        let mut gp = GpUcbState::new(kernel3(), 0.05).unwrap();
        let (_, mut prev) = gp.posterior().unwrap();
        for (i, p) in [0usize, 2, 1, 0, 2].iter().enumerate() {
            gp.update(PolicyId(*p), 0.1 * i as f64);
            let (_, sd) = gp.posterior().unwrap();
            for x in 0..3 {
                assert!(sd[x] <= prev[x] + 1e-12);
            }
            prev = sd;
        }
    }

    #[test]
    fn singular_gram_recovers_with_jitter() {
        let k = DMatrix::from_element(2, 2, 1.0);
        let mut gp = GpUcbState::new(k, 0.0).unwrap();
        gp.update(PolicyId(0), 0.5);
        gp.update(PolicyId(0), 0.5);
        assert!(gp.posterior().is_ok());
    }
}
