mod common;

use bpr_core::selection::{knowledge_gradients, select_ei, select_greedy, select_pi};
use bpr_core::{expected_utility, update_belief, Belief, PolicyId, Signal};
use common::{gaussian_kb, histogram_kb};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1.0, n)
}

/// Histogram kb with `n` types, `p` policies and `bins` bins of positive counts.
fn hist_instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<Vec<usize>>>)> {
    (1usize..6, 1usize..5, 2usize..5).prop_flat_map(|(n, p, bins)| {
        (
            prop::collection::vec(prop::collection::vec(-10.0f64..10.0, p), n),
            prop::collection::vec(
                prop::collection::vec(prop::collection::vec(1usize..20, bins), p),
                n,
            ),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn posterior_is_a_belief((means, counts) in hist_instance(), seed in any::<u64>()) {
        let kb = histogram_kb(&means, &counts);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Belief::from_weights((0..means.len()).map(|_| rand::Rng::random::<f64>(&mut rng) + 1e-3).collect()).unwrap();
        let bins = counts[0][0].len();
        for bin in 0..bins {
            let post = update_belief(&kb, &b, PolicyId(0), &Signal::CategoryBin(bin)).unwrap();
            prop_assert!(post.weights().iter().all(|w| *w >= 0.0));
            prop_assert!((post.weights().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn update_invariant_to_likelihood_rescaling(w in weights(5), lik in prop::collection::vec(1e-3f64..1.0, 5), c in 1e-3f64..1e3) {
        let b = Belief::from_weights(w).unwrap();
        let scaled: Vec<f64> = lik.iter().map(|l| l * c).collect();
        let p1 = b.posterior(&lik).unwrap();
        let p2 = b.posterior(&scaled).unwrap();
        for (x, y) in p1.weights().iter().zip(p2.weights()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sequential_updates_equal_batched(w in weights(6), l1 in prop::collection::vec(1e-3f64..1.0, 6), l2 in prop::collection::vec(1e-3f64..1.0, 6)) {
        let b = Belief::from_weights(w).unwrap();
        let seq = b.posterior(&l1).unwrap().posterior(&l2).unwrap();
        let prod: Vec<f64> = l1.iter().zip(&l2).map(|(a, c)| a * c).collect();
        let batch = b.posterior(&prod).unwrap();
        for (x, y) in seq.weights().iter().zip(batch.weights()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn expected_utility_is_linear((means, counts) in hist_instance(), w1 in weights(5), w2 in weights(5), a in 0.0f64..1.0) {
        let kb = histogram_kb(&means, &counts);
        let n = means.len();
        let b1 = Belief::from_weights(w1[..n].to_vec()).unwrap();
        let b2 = Belief::from_weights(w2[..n].to_vec()).unwrap();
        let mix = Belief::from_normalized(
            b1.weights().iter().zip(b2.weights()).map(|(x, y)| a * x + (1.0 - a) * y).collect(),
        ).unwrap();
        for p in kb.policy_ids() {
            let lhs = expected_utility(&kb, &mix, p);
            let rhs = a * expected_utility(&kb, &b1, p) + (1.0 - a) * expected_utility(&kb, &b2, p);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn greedy_invariant_under_utility_shift((means, counts) in hist_instance(), shift in -100.0f64..100.0, w in weights(5)) {
        let kb = histogram_kb(&means, &counts);
        let shifted: Vec<Vec<f64>> = means.iter().map(|r| r.iter().map(|m| m + shift).collect()).collect();
        let kb2 = histogram_kb(&shifted, &counts);
        let b = Belief::from_weights(w[..means.len()].to_vec()).unwrap();
        let eu = kb.expected_utilities(&b);
        let mut sorted = eu.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        prop_assume!(sorted.len() < 2 || sorted[0] - sorted[1] > 1e-9);
        prop_assert_eq!(select_greedy(&kb, &b), select_greedy(&kb2, &b));
    }

    #[test]
    fn knowledge_gradient_non_negative((means, counts) in hist_instance(), w in weights(5)) {
        let kb = histogram_kb(&means, &counts);
        let b = Belief::from_weights(w[..means.len()].to_vec()).unwrap();
        for v in knowledge_gradients(&kb, &b).unwrap() {
            prop_assert!(v >= -1e-9);
        }
    }

    #[test]
    fn every_strategy_returns_a_library_policy((means, counts) in hist_instance(), w in weights(5), seed in any::<u64>()) {
        let kb = histogram_kb(&means, &counts);
        let b = Belief::from_weights(w[..means.len()].to_vec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in all_strategies() {
            let p = s.select(&kb, &b, 1, 5, &mut rng).unwrap();
            prop_assert!(p.0 < kb.n_policies());
        }
    }

    #[test]
    fn pi_ei_invariant_to_belief_scale(w in weights(4), c in 1e-3f64..1e3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let means: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| rand::Rng::random_range(&mut rng, -5.0..5.0)).collect()).collect();
        let sds = vec![vec![1.0; 3]; 4];
        let kb = gaussian_kb(&means, &sds);
        let b1 = Belief::from_weights(w.clone()).unwrap();
        let b2 = Belief::from_weights(w.iter().map(|x| x * c).collect()).unwrap();
        prop_assert_eq!(select_ei(&kb, &b1), select_ei(&kb, &b2));
        prop_assert_eq!(select_pi(&kb, &b1, 3.0), select_pi(&kb, &b2, 3.0));
    }
}

fn all_strategies() -> Vec<bpr_core::Strategy> {
    use bpr_core::selection::{EntropyMode, ImprovementTarget};
    vec![
        bpr_core::Strategy::Greedy,
        bpr_core::Strategy::EpsGreedy { epsilon: 0.3 },
        bpr_core::Strategy::SampleBelief,
        bpr_core::Strategy::ProbabilityOfImprovement {
            target: ImprovementTarget::Midpoint { u_max: 12.0 },
        },
        bpr_core::Strategy::ExpectedImprovement { u_max: None },
        bpr_core::Strategy::BeliefEntropy {
            kappa: 1.0,
            mode: EntropyMode::PerSignal,
        },
        bpr_core::Strategy::BeliefEntropy {
            kappa: 1.0,
            mode: EntropyMode::ExpectedPosterior,
        },
        bpr_core::Strategy::KnowledgeGradient,
    ]
}

#[test]
fn uniform_entropy_is_log_n() {
    for n in 1..30 {
        assert_eq!(Belief::uniform(n).entropy(), (n as f64).ln());
    }
}
