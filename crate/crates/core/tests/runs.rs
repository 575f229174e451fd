mod common;

use bpr_core::domains::{Domain, GolfDomain};
use bpr_core::models::{train_offline, TrainingConfig};
use bpr_core::streams::{stream, Purpose};
use bpr_core::{run_bpr, KnowledgeBase, PolicyId, RunSeed, Strategy, TaskValues};
use common::gaussian_kb;
use rand::Rng;

fn golf_kb() -> KnowledgeBase {
    let cfg = TrainingConfig {
        episodes_per_pair: 1000,
        seed: 11,
        ..TrainingConfig::default()
    };
    train_offline(&GolfDomain::default(), &cfg).unwrap().0
}

#[test]
fn golf_greedy_settles_on_three_iron() {
    let d = GolfDomain::default();
    let kb = golf_kb();
    let values = TaskValues::for_task(&d, &179.0, 0, 0).unwrap();
    let runs = 1000;
    let settled = (0..runs)
        .filter(|&i| {
            let seed = RunSeed {
                master: 100 + i,
                task_index: 0,
            };
            let trace = run_bpr(&d, &kb, &179.0, &values, &Strategy::Greedy, 3, seed).unwrap();
            trace.policies()[1..].iter().all(|p| *p == PolicyId(1))
        })
        .count();
    assert!(settled as f64 >= 0.9 * runs as f64, "{settled}/{runs}");
}

#[test]
fn golf_mean_entropy_falls() {
    let d = GolfDomain::default();
    let kb = golf_kb();
    let mut totals = [0.0; 3];
    let runs = 1000;
    for i in 0..runs {
        let hole = d.sample_task(&mut stream(5, &[Purpose::Task as u64, i]));
        let values = TaskValues::for_task(&d, &hole, 0, 0).unwrap();
        let seed = RunSeed {
            master: 5,
            task_index: i,
        };
        let trace = run_bpr(&d, &kb, &hole, &values, &Strategy::Greedy, 3, seed).unwrap();
        assert_eq!(trace.records[0].entropy, Some(4f64.ln()));
        for (t, r) in trace.records.iter().enumerate() {
            totals[t] += r.entropy.unwrap();
        }
    }
    assert!(totals[0] > totals[1] && totals[1] > totals[2], "{totals:?}");
}

#[test]
fn fixed_strategy_has_constant_regret() {
    let d = GolfDomain::default();
    let kb = golf_kb();
    let values = TaskValues::for_task(&d, &150.0, 0, 0).unwrap();
    let strategy = Strategy::Fixed {
        policy: PolicyId(0),
    };
    let trace = run_bpr(
        &d,
        &kb,
        &150.0,
        &values,
        &strategy,
        8,
        RunSeed {
            master: 3,
            task_index: 0,
        },
    )
    .unwrap();
    let r = trace.regrets();
    assert!(r[0] > 0.0);
    assert!(r.iter().all(|x| *x == r[0]));
}

#[test]
fn single_policy_library_has_no_regret() {
    let d = GolfDomain::default();
    let kb = golf_kb()
        .restrict(&[bpr_core::TypeId(0)], &[PolicyId(2)])
        .unwrap();
    let values = TaskValues::for_task(&d, &200.0, 0, 0).unwrap();
    let trace = run_bpr(
        &d,
        &kb,
        &200.0,
        &values,
        &Strategy::KnowledgeGradient,
        5,
        RunSeed {
            master: 1,
            task_index: 0,
        },
    )
    .unwrap();
    assert!(trace.regrets().iter().all(|r| *r == 0.0));
    assert!(trace.records.iter().all(|r| r.entropy == Some(0.0)));
}

#[test]
fn runs_are_reproducible() {
    let d = GolfDomain::default();
    let kb = golf_kb();
    let values = TaskValues::for_task(&d, &170.0, 0, 0).unwrap();
    let seed = RunSeed {
        master: 42,
        task_index: 7,
    };
    let s = Strategy::SampleBelief;
    let a = run_bpr(&d, &kb, &170.0, &values, &s, 8, seed).unwrap();
    let b = run_bpr(&d, &kb, &170.0, &values, &s, 8, seed).unwrap();
    assert_eq!(a, b);
    let c = run_bpr(
        &d,
        &kb,
        &170.0,
        &values,
        &s,
        8,
        RunSeed {
            master: 43,
            task_index: 7,
        },
    )
    .unwrap();
    assert_ne!(a, c);
}

#[test]
fn zero_episodes_is_rejected() {
    let d = GolfDomain::default();
    let kb = golf_kb();
    let values = TaskValues::for_task(&d, &170.0, 0, 0).unwrap();
    assert!(run_bpr(
        &d,
        &kb,
        &170.0,
        &values,
        &Strategy::Greedy,
        0,
        RunSeed {
            master: 1,
            task_index: 0
        }
    )
    .is_err());
}

#[test]
fn kind_mismatch_is_rejected() {
    let d = GolfDomain::default();
    let kb = gaussian_kb(&[vec![0.0; 4]], &[vec![1.0; 4]]);
    let values = TaskValues::for_task(&d, &170.0, 0, 0).unwrap();
    assert!(run_bpr(
        &d,
        &kb,
        &170.0,
        &values,
        &Strategy::Greedy,
        1,
        RunSeed {
            master: 1,
            task_index: 0
        }
    )
    .is_err());
}

#[test]
fn streams_are_independent_of_order() {
    let a: u64 = stream(9, &[Purpose::Task as u64, 3]).random();
    let _: u64 = stream(9, &[Purpose::Task as u64, 2]).random();
    let b: u64 = stream(9, &[Purpose::Task as u64, 3]).random();
    assert_eq!(a, b);
}
