//! Acceptance suite: one check per criterion, one PASS/FAIL line each.
//! Runs as a plain binary so the summary lines always reach the output.

use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use ccsched::cclp::{cc_lp, classify, InstanceClass};
use ccsched::gen::{self, CcParams};
use ccsched::lateness::{lateness_objective, reduce_lateness, reduced_objective};
use ccsched::listlpt::list_lpt;
use ccsched::model::{derive, DerivedConstants, Permutation};
use ccsched::openshop::{exact_pd, mussq, mussq_run, pd_objective};
use ccsched::rational::{frac, int, to_f64, Q};
use ccsched::relaxation::{check_feasible, check_squares_bound, most_violated_prefix, separate, solve_lp1};
use ccsched::swag::{adversarial_objectives, gen_adversarial, swag_schedule};
use ccsched::transforms::{cc_atspt, cc_tspt, single_order_guarantee, time_resolution};
use ccsched::verify::{best_multi_sigma, best_single_sigma, gap_search, run, within, Algorithm};
use num_traits::Zero;
use rand::Rng;

// Pinned tolerances and sizes.
const RATIO_TOL: f64 = 1e-9;
const GAP_TARGET: f64 = 1.2 - 1e-9;
const LP_VALIDITY_INSTANCES: u64 = 1000;
const LP_VALIDITY_BUDGET: Duration = Duration::from_secs(120);
const SEPARATION_INSTANCES: u64 = 200;
const PER_CLASS_INSTANCES: u64 = 200;
const PD_INSTANCES: u64 = 500;
const PD_BUDGET: Duration = Duration::from_secs(300);
const SMITH_INSTANCES: u64 = 100;
const LATENESS_INSTANCES: u64 = 100;
const SQUARES_DRAWS: u64 = 10_000;
const MUSSQ_BUDGET: Duration = Duration::from_secs(5);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn small_params() -> CcParams {
    CcParams {
        jobs: 1..=8,
        clusters: 1..=3,
        machines: 1..=3,
        ..CcParams::default()
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in all_permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn lp_validity() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    for seed in 0..LP_VALIDITY_INSTANCES {
        let inst = gen::random_cc(&small_params(), None, &mut gen::rng(seed)).unwrap();
        let lp = solve_lp1(&inst).unwrap();
        for alg in Algorithm::ALL {
            if !alg.supports_releases() && !inst.has_zero_releases() {
                continue;
            }
            let s = run(&inst, alg).unwrap();
            if let Err(e) = check_feasible(&inst, &lp.cuts, &s.completion) {
                return outcome(false, format!("seed {seed} {alg}: {e}"));
            }
            let sep = separate(&inst, &s.completion);
            if !sep.is_feasible() {
                return outcome(false, format!("seed {seed} {alg}: separation found {:?}", sep.max_violation()));
            }
            checked += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        took < LP_VALIDITY_BUDGET,
        format!("{checked} schedules on {LP_VALIDITY_INSTANCES} instances satisfy every cut, {took:.1?}"),
    )
}

/// Largest set-cut violation over all subsets containing a job with work on
/// the cluster (the others are the trivial `0 >= 0`), by subset DP.
fn exhaustive_violation(d: &DerivedConstants, cluster: usize, c: &[Q]) -> Option<Q> {
    let n = c.len();
    let size = 1usize << n;
    let mut total = vec![Q::zero(); size];
    let mut squares = vec![Q::zero(); size];
    let mut lhs = vec![Q::zero(); size];
    let mut best: Option<Q> = None;
    for mask in 1..size {
        let j = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        let p = &d.p[j][cluster];
        if p.is_zero() {
            total[mask] = total[prev].clone();
            squares[mask] = squares[prev].clone();
            lhs[mask] = lhs[prev].clone();
        } else {
            total[mask] = &total[prev] + p;
            squares[mask] = &squares[prev] + p * p / &d.mu_ji[j][cluster];
            lhs[mask] = &lhs[prev] + p * &c[j];
        }
        if total[mask].is_zero() {
            continue;
        }
        let v = (&total[mask] * &total[mask] / &d.mu[cluster] + &squares[mask]) / int(2) - &lhs[mask];
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best
}

/// The prefix scan maximises over every subset, the empty one (violation 0)
/// included, so the compared quantity is `max(0, best nonempty violation)`.
/// Whenever some set is violated the raw values must agree as well.
fn separation() -> Outcome {
    let params = CcParams {
        jobs: 1..=12,
        ..small_params()
    };
    let clip = |v: &Option<Q>| v.clone().filter(|v| v > &Q::zero()).unwrap_or_else(Q::zero);
    let (mut compared, mut violated) = (0usize, 0usize);
    for seed in 0..SEPARATION_INSTANCES {
        let mut rng = gen::rng(10_000 + seed);
        let inst = gen::random_cc(&params, None, &mut rng).unwrap();
        let d = derive(&inst);
        let n = inst.n();
        let lower: Vec<Q> = (0..n).map(|j| d.job_lower_bound(&inst, j)).collect();
        let vectors = [
            (0..n).map(|_| int(rng.gen_range(0..=30))).collect::<Vec<_>>(),
            (0..n).map(|_| frac(rng.gen_range(0..=90), rng.gen_range(1..=7))).collect(),
            lower.clone(),
            lower.iter().map(|c| c + frac(rng.gen_range(0..=12), rng.gen_range(1..=4))).collect(),
            vec![Q::zero(); n],
        ];
        for c in &vectors {
            for i in 0..inst.m() {
                let oracle = most_violated_prefix(&d, i, c).map(|(_, v)| v);
                let truth = exhaustive_violation(&d, i, c);
                let (a, b) = (clip(&oracle), clip(&truth));
                if a != b || (b > Q::zero() && oracle != truth) {
                    return outcome(false, format!("seed {seed} cluster {i}: prefix {oracle:?} vs exhaustive {truth:?}"));
                }
                compared += 1;
                violated += usize::from(b > Q::zero());
            }
        }
    }
    outcome(
        true,
        format!("{compared} cluster/vector pairs on {SEPARATION_INSTANCES} instances (n <= 12) agree exactly, {violated} of them violated"),
    )
}

fn cclp_guarantees() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (k, class) in InstanceClass::ALL.into_iter().enumerate() {
        let mut worst = 0f64;
        for seed in 0..PER_CLASS_INSTANCES {
            let inst = gen::random_cc(&small_params(), Some(class), &mut gen::rng(20_000 + 1000 * k as u64 + seed)).unwrap();
            assert_eq!(classify(&inst), class);
            let res = cc_lp(&inst).unwrap();
            let g = res.certificate.guaranteed.clone().unwrap();
            let ok = within(&res.certificate.observed, &g) && res.certificate.observed_f64() >= 1.0 - RATIO_TOL;
            if !ok {
                pass = false;
                lines.push(format!("{class} seed {seed}: ratio {} > {}", to_f64(&res.certificate.observed), to_f64(&g)));
            }
            worst = worst.max(res.certificate.observed_f64());
        }
        lines.push(format!("{class} max {worst:.4}"));
    }
    outcome(pass, lines.join("; "))
}

fn tspt_guarantees() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    let (mut sum_t, mut sum_a, mut count) = (0f64, 0f64, 0usize);
    for (k, class) in [InstanceClass::IdAB, InstanceClass::IdANotB, InstanceClass::NonIdA].into_iter().enumerate() {
        for seed in 0..PER_CLASS_INSTANCES {
            let inst = gen::random_cc(&small_params(), Some(class), &mut gen::rng(30_000 + 1000 * k as u64 + seed)).unwrap();
            let t = cc_tspt(&inst).unwrap().certificate;
            let a = cc_atspt(&inst).unwrap().certificate;
            let g = single_order_guarantee(&inst);
            for c in [&t, &a] {
                if !within(&c.observed, &g) {
                    pass = false;
                    lines.push(format!("{} seed {seed}: {} > {}", c.algorithm, to_f64(&c.observed), to_f64(&g)));
                }
            }
            sum_t += t.observed_f64();
            sum_a += a.observed_f64();
            count += 1;
        }
    }
    lines.push(format!(
        "{count} instances, mean ratio cctspt {:.4}, ccatspt {:.4}",
        sum_t / count as f64,
        sum_a / count as f64
    ));
    outcome(pass, lines.join("; "))
}

fn fps_bound() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for rho in [1u64, 2, 5] {
        let mut worst = 0f64;
        for seed in 0..PER_CLASS_INSTANCES {
            let mut rng = gen::rng(40_000 + 1000 * rho + seed);
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=3);
            let inst = gen::fps(n, m, 3, rho, &mut rng).unwrap();
            assert_eq!(time_resolution(&inst).unwrap(), rho);
            let cert = cc_tspt(&inst).unwrap().certificate;
            let g = int(2) + frac(1, rho as i64);
            if !within(&cert.observed, &g) {
                pass = false;
                lines.push(format!("rho {rho} seed {seed}: {}", to_f64(&cert.observed)));
            }
            worst = worst.max(cert.observed_f64());
        }
        lines.push(format!("rho {rho}: max {worst:.4} (bound {:.4})", 2.0 + 1.0 / rho as f64));
    }
    outcome(pass, lines.join("; "))
}

fn mussq_factor() -> Outcome {
    let start = Instant::now();
    let mut worst_exact = 0f64;
    let mut worst_lp = 0f64;
    for seed in 0..PD_INSTANCES {
        let mut rng = gen::rng(50_000 + seed);
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=4);
        let pd = gen::random_pd(n, m, 9, 5, &mut rng).unwrap();
        let value = pd_objective(&pd, &mussq(&pd));
        let (_, opt) = exact_pd(&pd).unwrap();
        let lp = solve_lp1(&pd.to_instance("pd")).unwrap().objective;
        if value > &opt * int(2) || value > &lp * int(2) {
            return outcome(false, format!("seed {seed}: mussq {value}, exact {opt}, lp {lp}"));
        }
        if !opt.is_zero() {
            worst_exact = worst_exact.max(to_f64(&(&value / &opt)));
        }
        if !lp.is_zero() {
            worst_lp = worst_lp.max(to_f64(&(&value / &lp)));
        }
    }
    let took = start.elapsed();
    outcome(
        took < PD_BUDGET,
        format!("{PD_INSTANCES} instances: max mussq/exact {worst_exact:.4}, max mussq/lp {worst_lp:.4}, {took:.1?}"),
    )
}

fn swag_family() -> Outcome {
    let (l, p, eps) = (2usize, int(1), frac(1, 4));
    let alt_order = |m: usize| Permutation::identity(m + l);
    for m in [3usize, 10, 50] {
        let inst = gen_adversarial(m, l, &p, &eps).unwrap();
        let (_, sched) = swag_schedule(&inst).unwrap();
        let alt = list_lpt(&inst, &vec![alt_order(m); m]).unwrap();
        let (swag_cf, alt_cf) = adversarial_objectives(m, l, &p, &eps).unwrap();
        if sched.objective != swag_cf || alt.objective != alt_cf {
            return outcome(false, format!("m={m}: simulated ({}, {}) vs closed form ({swag_cf}, {alt_cf})", sched.objective, alt.objective));
        }
    }
    for m in 1..=200 {
        let inst = gen_adversarial(m, l, &p, &eps).unwrap();
        let (_, sched) = swag_schedule(&inst).unwrap();
        let alt = list_lpt(&inst, &vec![alt_order(m); m]).unwrap();
        let ratio = &sched.objective / &alt.objective;
        if ratio > int(2) {
            return outcome(true, format!("closed forms exact at m = 3, 10, 50; ratio first exceeds 2 at m = {m} ({:.4})", to_f64(&ratio)));
        }
    }
    outcome(false, "ratio never exceeded 2 for m <= 200")
}

fn smith_sanity() -> Outcome {
    let params = CcParams {
        jobs: 1..=8,
        clusters: 1..=1,
        machines: 1..=1,
        tasks: 1..=3,
        ..CcParams::default()
    };
    for seed in 0..SMITH_INSTANCES {
        let inst = gen::random_cc(&params, Some(InstanceClass::IdANotB), &mut gen::rng(60_000 + seed)).unwrap();
        // Smith's rule: ascending processing time over weight.
        let d = derive(&inst);
        let v = &inst.clusters[0].speeds[0];
        let mut jobs: Vec<usize> = (0..inst.n()).collect();
        jobs.sort_by(|&a, &b| (&d.p[a][0] / &inst.jobs[a].weight).cmp(&(&d.p[b][0] / &inst.jobs[b].weight)));
        let mut t = Q::zero();
        let mut smith = Q::zero();
        for j in jobs {
            t += &d.p[j][0] / v;
            smith += &inst.jobs[j].weight * &t;
        }
        for (name, value) in [
            ("cclp", cc_lp(&inst).unwrap().schedule.objective),
            ("cctspt", cc_tspt(&inst).unwrap().schedule.objective),
        ] {
            if value != smith {
                return outcome(false, format!("seed {seed} {name}: {value} vs Smith {smith}"));
            }
        }
    }
    outcome(true, format!("{SMITH_INSTANCES} single-machine instances: cclp and cctspt equal Smith's rule exactly"))
}

fn lateness_reduction() -> Outcome {
    let mut perms_checked = 0usize;
    for seed in 0..LATENESS_INSTANCES {
        let mut rng = gen::rng(70_000 + seed);
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=2);
        let li = gen::lateness(n, m, 6, 12, 4, &mut rng).unwrap();
        let reduced = reduce_lateness(&li).unwrap();
        let wd: Q = li.w.iter().zip(&li.d).map(|(w, d)| w * d).sum();
        let mut values = Vec::new();
        for order in all_permutations(n) {
            let sigma = Permutation::new(order).unwrap();
            let cc = reduced_objective(&reduced, &sigma);
            let late = lateness_objective(&li, &sigma).unwrap();
            if cc != &wd + &late {
                return outcome(false, format!("seed {seed} {:?}: {cc} != {wd} + {late}", sigma.as_slice()));
            }
            values.push((cc, late));
            perms_checked += 1;
        }
        let best_cc = values.iter().map(|(c, _)| c).min().unwrap().clone();
        let best_late = values.iter().map(|(_, l)| l).min().unwrap().clone();
        if values.iter().any(|(c, l)| *c == best_cc && *l != best_late) {
            return outcome(false, format!("seed {seed}: a CC-optimal order is not lateness-optimal"));
        }
    }
    outcome(true, format!("{LATENESS_INSTANCES} instances, {perms_checked} orders: identity exact, optima transfer"))
}

fn sigma_gap() -> Outcome {
    let witness = gap_search(2024, 200, 40).unwrap();
    let gap = to_f64(&witness.gap);
    let mut pd_checked = 0;
    for seed in 0..50 {
        let mut rng = gen::rng(80_000 + seed);
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=3);
        let inst = gen::random_pd(n, m, 6, 4, &mut rng).unwrap().to_instance("pd");
        let single = best_single_sigma(&inst).unwrap().1;
        let multi = best_multi_sigma(&inst).unwrap().1;
        if single != multi {
            return outcome(false, format!("open shop seed {seed}: single {single} vs multi {multi}"));
        }
        pd_checked += 1;
    }
    let inst = &witness.instance;
    let shape_ok = inst.n() <= 5 && inst.m() <= 2 && inst.clusters.iter().all(|c| c.speeds.iter().all(|v| *v == int(1)));
    outcome(
        gap >= GAP_TARGET && shape_ok,
        format!(
            "best gap {gap:.4} (n = {}, machines {:?}); {pd_checked} open shop instances with gap exactly 1",
            inst.n(),
            inst.clusters.iter().map(|c| c.machines()).collect::<Vec<_>>()
        ),
    )
}

fn squares_inequality() -> Outcome {
    let mut rng = gen::rng(90_000);
    for draw in 0..SQUARES_DRAWS {
        let z = rng.gen_range(1..=8);
        let a: Vec<Q> = (0..z)
            .map(|_| if rng.gen_bool(0.3) { Q::zero() } else { frac(rng.gen_range(1..=50), rng.gen_range(1..=9)) })
            .collect();
        let mut b: Vec<Q> = (0..z).map(|_| frac(rng.gen_range(1..=50), rng.gen_range(1..=9))).collect();
        b.sort_by(|x, y| y.cmp(x));
        let bound = check_squares_bound(&a, &b).unwrap();
        if !bound.holds() {
            return outcome(false, format!("draw {draw}: {a:?} {b:?}"));
        }
    }
    outcome(true, format!("{SQUARES_DRAWS} draws hold exactly"))
}

fn mussq_performance() -> Outcome {
    let mut rng = gen::rng(95_000);
    let instance = |n: usize, m: usize, rng: &mut rand_chacha::ChaCha8Rng| {
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..=100) as f64).collect()).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=10) as f64).collect();
        (x, w)
    };
    let (x, w) = instance(2000, 50, &mut rng);
    let start = Instant::now();
    let big = mussq_run(&x, &w);
    let took = start.elapsed();
    // operations per (n^2 + n m) stay flat when n doubles
    let mut per_unit = Vec::new();
    for n in [250usize, 500, 1000, 2000] {
        let (x, w) = instance(n, 50, &mut rng);
        let ops = mussq_run(&x, &w).ops as f64;
        per_unit.push(ops / (n * n + n * 50) as f64);
    }
    let spread = per_unit.iter().cloned().fold(0f64, f64::max) / per_unit.iter().cloned().fold(f64::MAX, f64::min);
    outcome(
        took < MUSSQ_BUDGET && spread < 1.5 && big.order.len() == 2000,
        format!("n=2000, m=50 in {took:.2?}; ops/(n^2+nm) = {per_unit:.3?}"),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("LP validity", lp_validity),
        ("separation correctness", separation),
        ("CC-LP guarantees", cclp_guarantees),
        ("CC-TSPT guarantee", tspt_guarantees),
        ("fps bound", fps_bound),
        ("MUSSQ factor", mussq_factor),
        ("SWAG degeneracy", swag_family),
        ("single-machine sanity", smith_sanity),
        ("lateness reduction", lateness_reduction),
        ("single-order gap", sigma_gap),
        ("sum-of-squares inequality", squares_inequality),
        ("MUSSQ performance", mussq_performance),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let results: Vec<(usize, &str, Outcome, Duration)> = thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .filter(|(k, (name, _))| filter.as_ref().is_none_or(|f| name.contains(f.as_str()) || (k + 1).to_string() == *f))
            .map(|(k, (name, f))| {
                let f = *f;
                (k + 1, *name, s.spawn(move || {
                    let t = Instant::now();
                    let o = f();
                    (o, t.elapsed())
                }))
            })
            .collect();
        handles
            .into_iter()
            .map(|(k, name, h)| {
                let (o, t) = h.join().unwrap_or_else(|_| (outcome(false, "panicked"), Duration::ZERO));
                (k, name, o, t)
            })
            .collect()
    });
    let mut failed = 0;
    for (k, name, o, t) in &results {
        println!(
            "criterion {k:>2} {:<26} {} ({:.1?}): {}",
            name,
            if o.pass { "PASS" } else { "FAIL" },
            t,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
