mod common;

use coflow_core::harness::{run_scenario, trial_instance, Scenario};
use coflow_core::lowerbound::lower_bounds;
use coflow_core::model::{predicted_makespan, NetworkSpec, Time};
use coflow_core::oracle::{brute_force_coflow, brute_force_flow, Limits};
use coflow_core::realizer::{realize, simulate_discrete};
use coflow_core::schedulers::SchedulerKind;
use coflow_core::workload::{gen_instance, gen_speeds, Mixture};
use common::{makespan_of, small_instance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_scheduler_keeps_its_ledgers(seed in any::<u64>(), m in 1usize..6, k in 0u32..12, hetero in any::<bool>()) {
        let mut r = rng(seed);
        let mut inst = gen_instance(k, 8, m, &Mixture::standard(8).unwrap(), &mut r).unwrap();
        if hetero {
            let net = NetworkSpec::with_speeds(8, gen_speeds(m, 1, &mut r).unwrap()).unwrap();
            inst = inst.with_network(net).unwrap();
        }
        for kind in SchedulerKind::ALL {
            let Ok(a) = kind.schedule(&inst) else {
                prop_assert!(hetero && kind.requires_identical() && !inst.network().is_identical());
                continue;
            };
            prop_assert!(a.is_complete());
            prop_assert!(a.ledgers_consistent(&inst));
            let cores: Vec<usize> = a.flow_cores().iter().map(|c| c.unwrap()).collect();
            prop_assert!(cores.iter().all(|&h| h < m));
            let predicted = predicted_makespan(&a, &inst).unwrap();
            prop_assert_eq!(predicted.overall, makespan_of(&inst, &cores));
            prop_assert!(predicted.overall >= lower_bounds(&inst).combined);
            if kind.granularity() == coflow_core::model::Granularity::Coflow {
                for pos in 0..inst.coflows().len() {
                    let h = a.coflow_core(pos).unwrap();
                    prop_assert!(inst.flow_range(pos).all(|id| cores[id] == h));
                }
            }
        }
    }

    #[test]
    fn schedulers_are_deterministic(seed in any::<u64>(), m in 1usize..5) {
        let inst = gen_instance(10, 6, m, &Mixture::standard(6).unwrap(), &mut rng(seed)).unwrap();
        let again = gen_instance(10, 6, m, &Mixture::standard(6).unwrap(), &mut rng(seed)).unwrap();
        prop_assert_eq!(&inst, &again);
        for kind in SchedulerKind::ALL {
            prop_assert_eq!(kind.schedule(&inst).unwrap(), kind.schedule(&again).unwrap());
        }
    }

    #[test]
    fn discrete_never_beats_the_fluid_schedule(seed in any::<u64>(), m in 1usize..4) {
        let inst = small_instance(&mut rng(seed), m, 4, 12, 4, 9);
        for kind in [SchedulerKind::Fls, SchedulerKind::Flpt, SchedulerKind::Cls] {
            let a = kind.schedule(&inst).unwrap();
            let fluid = realize(&a, &inst).unwrap().makespan(&inst);
            let run = simulate_discrete(&a, &inst).unwrap();
            for (h, &done) in run.core_completion.iter().enumerate() {
                prop_assert!(Time::from_integer(done as i64) >= fluid.per_core[h]);
            }
        }
    }

    #[test]
    fn optima_are_ordered(seed in any::<u64>(), m in 2usize..4) {
        let inst = small_instance(&mut rng(seed), m, 3, 7, 4, 9);
        let flow = brute_force_flow(&inst, Limits::default()).unwrap();
        let coflow = brute_force_coflow(&inst, Limits::default()).unwrap();
        prop_assert!(coflow.optimum >= flow.optimum);
        prop_assert!(flow.optimum >= lower_bounds(&inst).combined);
        prop_assert_eq!(predicted_makespan(&flow.witness, &inst).unwrap().overall, flow.optimum);
        prop_assert_eq!(predicted_makespan(&coflow.witness, &inst).unwrap().overall, coflow.optimum);
    }
}

#[test]
fn realized_equals_predicted_over_a_thousand_seeds() {
    let mix = Mixture::standard(10).unwrap();
    for seed in 0..1000u64 {
        let mut r = rng(seed);
        let m = [1, 2, 3, 5, 8][seed as usize % 5];
        let mut inst = gen_instance(8, 10, m, &mix, &mut r).unwrap();
        if seed % 2 == 1 {
            let net = NetworkSpec::with_speeds(10, gen_speeds(m, 1, &mut r).unwrap()).unwrap();
            inst = inst.with_network(net).unwrap();
        }
        for kind in SchedulerKind::ALL {
            let Ok(a) = kind.schedule(&inst) else { continue };
            let predicted = predicted_makespan(&a, &inst).unwrap();
            let realized = realize(&a, &inst).unwrap();
            assert_eq!(
                realized.makespan(&inst).per_core,
                predicted.per_core,
                "seed {seed} {kind}"
            );
            assert_eq!(
                realized.makespan(&inst).overall,
                predicted.overall,
                "seed {seed} {kind}"
            );
        }
    }
}

#[test]
fn pruned_oracle_matches_full_enumeration() {
    let full = Limits {
        symmetry: false,
        ..Limits::default()
    };
    for seed in 0..50u64 {
        let m = 2 + seed as usize % 2;
        let inst = small_instance(&mut rng(seed), m, 3, 8, 5, 12);
        let a = brute_force_flow(&inst, Limits::default()).unwrap();
        let b = brute_force_flow(&inst, full).unwrap();
        assert_eq!(a.optimum, b.optimum, "seed {seed}");
        assert!(a.explored <= b.explored);
        let a = brute_force_coflow(&inst, Limits::default()).unwrap();
        let b = brute_force_coflow(&inst, full).unwrap();
        assert_eq!(a.optimum, b.optimum, "seed {seed}");
    }
}

#[test]
fn a_single_trial_can_be_replayed() {
    let s = Scenario::from_toml(
        "name = \"replay\"\ncores = [3, 6]\ncoflows = [7]\ntrials = 6\nseed = 99\nschedulers = [\"flpt\", \"cls\"]",
    )
    .unwrap();
    let report = run_scenario(&s).unwrap();
    for row in &report.rows {
        let point = s.points().iter().position(|p| p.label() == row.point).unwrap();
        let inst = trial_instance(&s, point, row.trial).unwrap();
        let a = row.scheduler.schedule(&inst).unwrap();
        let span = predicted_makespan(&a, &inst).unwrap().overall;
        assert_eq!(coflow_core::model::to_f64(&span), row.makespan);
    }
}

#[test]
fn single_core_flow_schedules_meet_the_port_bound() {
    let s = Scenario::from_toml(
        "name = \"one\"\ncores = [1]\ncoflows = [1, 4]\ntrials = 20\nseed = 5\nschedulers = [\"fls\", \"flpt\", \"weaver\"]",
    )
    .unwrap();
    let report = run_scenario(&s).unwrap();
    assert_eq!(report.rows.len(), 2 * 20 * 3);
    assert!(report.rows.iter().all(|r| r.ratio_port == 1.0));
}
