use super::gaussian::GaussianModel;
use super::histogram::HistogramModel;
use super::performance::PerformanceModel;
use super::trace::TraceModel;
use crate::error::{BprError, Result};
use crate::signal::Signal;
use serde::{Deserialize, Serialize};

/// Distribution over signals emitted when one policy runs on one type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ObservationModel {
    Histogram(HistogramModel),
    Gaussian(GaussianModel),
    Trace(TraceModel),
    /// Episodic-return signals reuse the performance model directly.
    SameAsPerformance,
}

impl ObservationModel {
    pub fn family(&self) -> &'static str {
        match self {
            ObservationModel::Histogram(_) => "histogram",
            ObservationModel::Gaussian(_) => "gaussian",
            ObservationModel::Trace(_) => "trace",
            ObservationModel::SameAsPerformance => "same_as_performance",
        }
    }

    pub fn log_likelihood(&self, perf: &PerformanceModel, signal: &Signal) -> Result<f64> {
        match (self, signal) {
            (ObservationModel::Histogram(h), Signal::CategoryBin(b)) => h
                .probability(*b)
                .map(f64::ln)
                .ok_or_else(|| BprError::SignalOutOfSpace(format!("bin {b} of {}", h.bins()))),
            (ObservationModel::Histogram(_), other) => Err(mismatch("category_bin", other)),
            (ObservationModel::Gaussian(g), Signal::ScalarReal(x)) => Ok(g.log_density(*x)),
            (ObservationModel::Gaussian(_), other) => Err(mismatch("scalar_real", other)),
            (ObservationModel::Trace(t), s) => t.log_likelihood(s),
            (ObservationModel::SameAsPerformance, Signal::EpisodicReturn(u)) => match perf {
                PerformanceModel::Gaussian(g) => Ok(g.log_density(*u)),
                PerformanceModel::Categorical(c) => c
                    .probability(*u)
                    .map(f64::ln)
                    .ok_or_else(|| BprError::SignalOutOfSpace(format!("return {u}"))),
            },
            (ObservationModel::SameAsPerformance, other) => Err(mismatch("episodic_return", other)),
        }
    }

    pub fn likelihood(&self, perf: &PerformanceModel, signal: &Signal) -> Result<f64> {
        self.log_likelihood(perf, signal).map(f64::exp)
    }

    /// The Gaussian signal distribution, if the signal space is continuous and Gaussian.
    pub fn continuous_gaussian<'a>(
        &'a self,
        perf: &'a PerformanceModel,
    ) -> Option<&'a GaussianModel> {
        match self {
            ObservationModel::Gaussian(g) => Some(g),
            ObservationModel::SameAsPerformance => perf.as_gaussian(),
            _ => None,
        }
    }
}

fn mismatch(expected: &'static str, actual: &Signal) -> BprError {
    BprError::FamilyMismatch {
        expected,
        actual: actual.kind().name(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::categorical::CategoricalModel;

    #[test]
    fn histogram_likelihoods() {
        let obs = ObservationModel::Histogram(HistogramModel::fit(2, 1.0, [0, 1]));
        let perf = PerformanceModel::Gaussian(GaussianModel::new(0.0, 1.0));
        assert!((obs.likelihood(&perf, &Signal::CategoryBin(1)).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            obs.likelihood(&perf, &Signal::ScalarReal(0.0)),
            Err(BprError::FamilyMismatch { .. })
        ));
        assert!(matches!(
            obs.likelihood(&perf, &Signal::CategoryBin(2)),
            Err(BprError::SignalOutOfSpace(_))
        ));
    }

    #[test]
    fn episodic_return_reads_performance_model() {
        let c = CategoricalModel::fit(vec![10.0, -3.0], 0.0, &[10.0, -3.0, 10.0, 10.0]).unwrap();
        let perf = PerformanceModel::Categorical(c);
        let obs = ObservationModel::SameAsPerformance;
        assert!(
            (obs.likelihood(&perf, &Signal::EpisodicReturn(10.0))
                .unwrap()
                - 0.75)
                .abs()
                < 1e-15
        );
        assert!(obs.likelihood(&perf, &Signal::EpisodicReturn(2.0)).is_err());
    }
}
