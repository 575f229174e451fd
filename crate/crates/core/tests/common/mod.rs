#![allow(dead_code)]

use bpr_core::kb::{ModelPair, PolicyInfo, TypeInfo};
use bpr_core::models::{GaussianModel, HistogramModel, ObservationModel, PerformanceModel};
use bpr_core::{KnowledgeBase, SignalKind};

pub fn names(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn infos(n_types: usize, n_policies: usize) -> (Vec<TypeInfo>, Vec<PolicyInfo>) {
    (
        names(n_types, "t")
            .into_iter()
            .map(|name| TypeInfo { name })
            .collect(),
        names(n_policies, "p")
            .into_iter()
            .enumerate()
            .map(|(domain_index, name)| PolicyInfo { name, domain_index })
            .collect(),
    )
}

/// Gaussian performance models whose signal is the return itself.
pub fn gaussian_kb(means: &[Vec<f64>], sds: &[Vec<f64>]) -> KnowledgeBase {
    let (types, policies) = infos(means.len(), means[0].len());
    let models = means
        .iter()
        .zip(sds)
        .map(|(mr, sr)| {
            mr.iter()
                .zip(sr)
                .map(|(&m, &s)| {
                    let g = GaussianModel::new(m, s);
                    ModelPair {
                        performance: PerformanceModel::Gaussian(g),
                        observation: ObservationModel::Gaussian(g),
                    }
                })
                .collect()
        })
        .collect();
    KnowledgeBase::with_uniform_prior(SignalKind::ScalarReal, types, policies, models).unwrap()
}

/// Histogram signals with exact probabilities `counts / Σ counts` and unit-sd
/// Gaussian performance around `means`.
pub fn histogram_kb(means: &[Vec<f64>], counts: &[Vec<Vec<usize>>]) -> KnowledgeBase {
    let (types, policies) = infos(means.len(), means[0].len());
    let models = means
        .iter()
        .zip(counts)
        .map(|(mr, cr)| {
            mr.iter()
                .zip(cr)
                .map(|(&m, c)| {
                    let samples = c
                        .iter()
                        .enumerate()
                        .flat_map(|(bin, &k)| std::iter::repeat_n(bin, k));
                    ModelPair {
                        performance: PerformanceModel::Gaussian(GaussianModel::new(m, 1.0)),
                        observation: ObservationModel::Histogram(HistogramModel::fit(
                            c.len(),
                            0.0,
                            samples,
                        )),
                    }
                })
                .collect()
        })
        .collect();
    KnowledgeBase::with_uniform_prior(SignalKind::CategoryBin, types, policies, models).unwrap()
}

/// Φ by composite Simpson integration of the density from −12.
pub fn phi_oracle(z: f64) -> f64 {
    if z < -12.0 {
        return 0.0;
    }
    let n = 20_000;
    let a = -12.0;
    let h = (z - a) / n as f64;
    let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = f(a) + f(z);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}
