//! Cross-module properties on seeded random instances.

use ccsched::cclp::cc_lp;
use ccsched::gen::{self, CcParams};
use ccsched::listlpt::{cluster_completions, list_lpt_single};
use ccsched::model::{derive, Instance, Permutation};
use ccsched::openshop::{exact_pd, mussq, mussq_run, pd_completions, pd_objective};
use ccsched::rational::{int, Q};
use ccsched::relaxation::{solve_lp1, solve_lp1_with, LpOptions};
use ccsched::swag::swag;
use ccsched::transforms::{atspt, cc_atspt, cc_tspt, tspt};
use ccsched::verify::{best_multi_sigma, best_single_sigma, certify, Algorithm};
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn small(seed: u64, zero_release: bool) -> Instance {
    let params = CcParams {
        jobs: 1..=6,
        release: if zero_release { 0..=0 } else { 0..=6 },
        ..CcParams::default()
    };
    gen::random_cc(&params, None, &mut gen::rng(seed)).unwrap()
}

fn shuffled(n: usize, seed: u64) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut gen::rng(seed ^ 0x5eed));
    Permutation::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Completion of every subjob under List-LPT is at most the largest
    /// release so far, plus its longest task at average speed, plus the rest
    /// of the prefix work at total speed.
    #[test]
    fn list_schedule_completion_bound(seed in any::<u64>()) {
        let inst = small(seed, false);
        let d = derive(&inst);
        for i in 0..inst.m() {
            let sigma = shuffled(inst.n(), seed + i as u64);
            let done = cluster_completions(&inst, i, sigma.as_slice());
            let mut release = Q::zero();
            let mut work = Q::zero();
            for &j in sigma.as_slice() {
                let sub = inst.subjob(j, i);
                if sub.is_empty() {
                    continue;
                }
                release = release.max(sub.release.clone());
                work += &d.p[j][i];
                let bound = &release + &d.p_first[j][i] / &d.vbar[i] + (&work - &d.p_first[j][i]) / &d.mu[i];
                prop_assert!(done[j].clone().unwrap() <= bound);
            }
        }
    }

    /// Pointwise comparison of a single-order schedule with the open shop
    /// schedule of the collapsed instance.
    #[test]
    fn collapsed_instance_dominates_pointwise(seed in any::<u64>()) {
        let inst = small(seed, true);
        let d = derive(&inst);
        let image = tspt(&inst).unwrap().image;
        let sigma = shuffled(inst.n(), seed);
        let cc = list_lpt_single(&inst, &sigma).unwrap().completion;
        let pd = pd_completions(&image, &sigma);
        for j in 0..inst.n() {
            let slack = (0..inst.m()).map(|i| &d.p_first[j][i] / &d.vbar[i]).max().unwrap();
            prop_assert!(cc[j] <= &pd[j] + slack, "job {}: {} vs {}", j, cc[j], pd[j]);
        }
    }

    #[test]
    fn relaxation_monotone_and_bounded(seed in any::<u64>()) {
        let inst = small(seed, false);
        let with = solve_lp1(&inst).unwrap();
        prop_assert!(with.history.windows(2).all(|w| w[0] <= w[1]));
        let without = solve_lp1_with(&inst, LpOptions { include_bounds: false, ..LpOptions::default() }).unwrap();
        prop_assert!(with.objective >= without.objective);
        let res = cc_lp(&inst).unwrap();
        prop_assert!(res.schedule.objective >= res.lp.objective);
    }

    #[test]
    fn augmented_relaxation_is_tighter(seed in any::<u64>()) {
        let inst = small(seed, true);
        let plain = solve_lp1(&tspt(&inst).unwrap().image.to_instance("tspt")).unwrap().objective;
        let aug = solve_lp1(&atspt(&inst).unwrap().image.to_instance("atspt")).unwrap().objective;
        prop_assert!(aug >= plain);
    }

    #[test]
    fn weight_scaling_keeps_the_ratio(seed in any::<u64>(), k in 2i64..7) {
        let inst = small(seed, false);
        let mut scaled = inst.clone();
        for j in &mut scaled.jobs {
            j.weight *= int(k);
        }
        let a = cc_lp(&inst).unwrap();
        let b = cc_lp(&scaled).unwrap();
        prop_assert_eq!(a.certificate.observed, b.certificate.observed);
    }

    #[test]
    fn open_shop_objective_matches_list_schedule(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let pd = gen::random_pd(rng.gen_range(1..=7), rng.gen_range(1..=4), 9, 5, &mut rng).unwrap();
        let sigma = shuffled(pd.n(), seed);
        let inst = pd.to_instance("pd");
        prop_assert_eq!(pd_objective(&pd, &sigma), list_lpt_single(&inst, &sigma).unwrap().objective);
        // identity map for unit speeds
        prop_assert_eq!(tspt(&inst).unwrap().image, pd.clone());
        let (_, opt) = exact_pd(&pd).unwrap();
        let swag_value = list_lpt_single(&inst, &swag(&inst).order).unwrap().objective;
        prop_assert!(swag_value >= opt);
        prop_assert!(pd_objective(&pd, &mussq(&pd)) <= &opt * int(2));
        prop_assert!(pd_objective(&pd, &mussq(&pd)) >= opt);
    }

    /// Exact and float MUSSQ may break rounding-level ties differently, but
    /// both orders stay within twice the relaxation value.
    #[test]
    fn mussq_float_and_exact_within_factor_two(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let pd = gen::random_pd(rng.gen_range(1..=12), rng.gen_range(1..=5), 20, 9, &mut rng).unwrap();
        let lp = solve_lp1(&pd.to_instance("pd")).unwrap().objective;
        let exact = mussq(&pd);
        let float = mussq_run(&pd.x_f64(), &pd.weights_f64()).order;
        prop_assert!(pd_objective(&pd, &exact) <= &lp * int(2));
        prop_assert!(pd_objective(&pd, &float) <= &lp * int(2));
    }

    #[test]
    fn lower_bound_below_list_optimum(seed in any::<u64>()) {
        let params = CcParams { jobs: 1..=5, clusters: 1..=2, ..CcParams::default() };
        let inst = gen::random_cc(&params, None, &mut gen::rng(seed)).unwrap();
        let lp = solve_lp1(&inst).unwrap().objective;
        let (_, multi) = best_multi_sigma(&inst).unwrap();
        let (_, single) = best_single_sigma(&inst).unwrap();
        prop_assert!(lp <= multi);
        prop_assert!(multi <= single);
    }
}

#[test]
fn mussq_operation_count_is_quadratic() {
    let mut rng = gen::rng(3);
    let mut ops = Vec::new();
    for n in [200usize, 400, 800] {
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..20).map(|_| rng.gen_range(1..=50) as f64).collect()).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=9) as f64).collect();
        ops.push(mussq_run(&x, &w).ops as f64);
    }
    for pair in ops.windows(2) {
        let growth = pair[1] / pair[0];
        assert!(growth > 3.0 && growth < 5.0, "doubling n multiplied ops by {growth}");
    }
}

#[test]
fn single_order_algorithms_on_identical_machines() {
    for seed in 0..60 {
        let params = CcParams { jobs: 1..=6, release: 0..=0, speed: 1..=1, ..CcParams::default() };
        let inst = gen::random_cc(&params, None, &mut gen::rng(1_000 + seed)).unwrap();
        let lp = solve_lp1(&inst).unwrap().objective;
        for s in [cc_tspt(&inst).unwrap().schedule, cc_atspt(&inst).unwrap().schedule] {
            assert!(s.objective <= &lp * int(3));
        }
    }
}

#[test]
fn adversarial_family_separates_swag_from_tspt() {
    let inst = ccsched::swag::gen_adversarial(20, 3, &int(1), &ccsched::rational::frac(1, 4)).unwrap();
    let swag_cert = certify(&inst, Algorithm::Swag).unwrap();
    let tspt_cert = certify(&inst, Algorithm::CcTspt).unwrap();
    assert!(swag_cert.observed > tspt_cert.observed);
    assert!(swag_cert.guaranteed.is_none());
}

#[test]
fn augmented_order_not_worse_on_benchmark_suite() {
    let params = CcParams::benchmark();
    let (mut t, mut a) = (0f64, 0f64);
    for seed in 0..60 {
        let inst = gen::random_cc(&params, None, &mut gen::rng(seed)).unwrap();
        t += cc_tspt(&inst).unwrap().certificate.observed_f64();
        a += cc_atspt(&inst).unwrap().certificate.observed_f64();
    }
    assert!(a <= t, "mean ratio ccatspt {} > cctspt {}", a / 60.0, t / 60.0);
}
