//! Ground truth for small instances and ratio certificates.
//!
//! Certificates compare an algorithm's objective with a lower bound on the
//! optimum. The bound is the LP relaxation value; on concurrent open shop
//! instances without release times, where a single permutation is optimal,
//! the enumerated optimum is used when it is larger. The list-schedule
//! optima computed here are *not* lower bounds in general: the optimum of a
//! cluster instance may lie outside the list-schedule class.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};

use crate::cclp::{cc_lp, classify, guarantee};
use crate::error::{Error, Result};
use crate::listlpt::{cluster_completions, list_lpt, list_lpt_single, weighted_sum};
use crate::model::{Instance, Permutation, Schedule};
use crate::openshop::exact_pd_capped;
use crate::rational::{from_f64, Q};
use crate::relaxation::solve_lp1;
use crate::swag::swag;
use crate::transforms::{cc_atspt, cc_tspt, single_order_guarantee, tspt};

/// Relative slack allowed when comparing an observed ratio with a guarantee.
pub const RATIO_TOL: f64 = 1e-9;
/// Default job cap for [`best_single_sigma`].
pub const SINGLE_SIGMA_CAP: usize = 8;
/// Default job and cluster caps for [`best_multi_sigma`].
pub const MULTI_SIGMA_CAP: (usize, usize) = (6, 3);
/// Job cap for using the enumerated optimum as a bound in [`certify`].
pub const CERTIFY_EXACT_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    CcLp,
    CcTspt,
    CcAtspt,
    Swag,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::CcLp, Algorithm::CcTspt, Algorithm::CcAtspt, Algorithm::Swag];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::CcLp => "cclp",
            Algorithm::CcTspt => "cctspt",
            Algorithm::CcAtspt => "ccatspt",
            Algorithm::Swag => "swag",
        }
    }

    /// Whether the algorithm accepts release times.
    pub fn supports_releases(self) -> bool {
        matches!(self, Algorithm::CcLp | Algorithm::Swag)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    Lp1,
    /// Enumerated optimum of a concurrent open shop instance.
    PdOptimum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCertificate {
    pub algorithm: String,
    pub objective: Q,
    pub lower_bound: Q,
    pub bound_source: BoundSource,
    /// `None` when the algorithm has no constant guarantee.
    pub guaranteed: Option<Q>,
    pub observed: Q,
    pub instance_class: String,
    pub pass: bool,
}

impl RatioCertificate {
    pub fn observed_f64(&self) -> f64 {
        self.observed.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `objective / lower_bound`, with `0 / 0 = 1`.
pub fn ratio(objective: &Q, lower_bound: &Q) -> Q {
    if lower_bound.is_zero() {
        if objective.is_zero() {
            Q::from_integer(1.into())
        } else {
            Q::from_integer(i64::MAX.into())
        }
    } else {
        objective / lower_bound
    }
}

/// `observed <= guaranteed (1 + RATIO_TOL)`.
pub fn within(observed: &Q, guaranteed: &Q) -> bool {
    let slack = from_f64(1.0 + RATIO_TOL).expect("finite");
    *observed <= guaranteed * slack
}

pub fn certificate_with_bound(
    inst: &Instance,
    algorithm: &str,
    objective: &Q,
    lower_bound: &Q,
    guaranteed: Option<Q>,
) -> RatioCertificate {
    let observed = ratio(objective, lower_bound);
    let pass = guaranteed.as_ref().is_none_or(|g| within(&observed, g));
    RatioCertificate {
        algorithm: algorithm.to_string(),
        objective: objective.clone(),
        lower_bound: lower_bound.clone(),
        bound_source: BoundSource::Lp1,
        guaranteed,
        observed,
        instance_class: classify(inst).tag().to_string(),
        pass,
    }
}

/// Certificate against the LP relaxation value.
pub fn certificate_for(
    inst: &Instance,
    algorithm: &str,
    objective: &Q,
    guaranteed: Option<Q>,
) -> Result<RatioCertificate> {
    let lp = solve_lp1(inst)?;
    Ok(certificate_with_bound(inst, algorithm, objective, &lp.objective, guaranteed))
}

/// Runs `alg` and returns its schedule.
pub fn run(inst: &Instance, alg: Algorithm) -> Result<Schedule> {
    Ok(match alg {
        Algorithm::CcLp => cc_lp(inst)?.schedule,
        Algorithm::CcTspt => cc_tspt(inst)?.schedule,
        Algorithm::CcAtspt => cc_atspt(inst)?.schedule,
        Algorithm::Swag => list_lpt_single(inst, &swag(inst).order)?,
    })
}

/// Guarantee of `alg` on `inst`; `None` for SWAG.
pub fn guarantee_for(inst: &Instance, alg: Algorithm) -> Option<Q> {
    match alg {
        Algorithm::CcLp => Some(guarantee(inst)),
        Algorithm::CcTspt | Algorithm::CcAtspt => Some(single_order_guarantee(inst)),
        Algorithm::Swag => None,
    }
}

/// Best available lower bound on the optimum of `inst`.
pub fn lower_bound(inst: &Instance) -> Result<(Q, BoundSource)> {
    lower_bound_from_lp(inst, &solve_lp1(inst)?.objective)
}

/// As [`lower_bound`], reusing an already computed relaxation value.
pub fn lower_bound_from_lp(inst: &Instance, lp: &Q) -> Result<(Q, BoundSource)> {
    if inst.is_single_machine_clusters() && inst.has_zero_releases() && inst.n() <= CERTIFY_EXACT_CAP {
        let (_, opt) = exact_pd_capped(&tspt(inst)?.image, CERTIFY_EXACT_CAP)?;
        if opt > *lp {
            return Ok((opt, BoundSource::PdOptimum));
        }
    }
    Ok((lp.clone(), BoundSource::Lp1))
}

pub fn certify(inst: &Instance, alg: Algorithm) -> Result<RatioCertificate> {
    let schedule = run(inst, alg)?;
    let (bound, source) = lower_bound(inst)?;
    let mut cert = certificate_with_bound(inst, alg.name(), &schedule.objective, &bound, guarantee_for(inst, alg));
    cert.bound_source = source;
    Ok(cert)
}

/// Advances `a` to the next permutation in lexicographic order.
fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("suffix has a larger element");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    loop {
        f(&a);
        if !next_permutation(&mut a) {
            break;
        }
    }
}

/// Best list schedule that uses the same order on every cluster.
pub fn best_single_sigma(inst: &Instance) -> Result<(Permutation, Q)> {
    best_single_sigma_capped(inst, SINGLE_SIGMA_CAP)
}

pub fn best_single_sigma_capped(inst: &Instance, cap: usize) -> Result<(Permutation, Q)> {
    if inst.n() > cap {
        return Err(Error::InstanceTooLarge { size: inst.n(), cap });
    }
    let mut best: Option<(Vec<usize>, Q)> = None;
    for_each_permutation(inst.n(), |sigma| {
        let c = job_completions(inst, &vec![sigma; inst.m()]);
        let value = weighted_sum(inst, &c);
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((sigma.to_vec(), value));
        }
    });
    let (order, value) = best.expect("at least one permutation");
    Ok((Permutation::new(order)?, value))
}

fn job_completions(inst: &Instance, sigmas: &[&[usize]]) -> Vec<Q> {
    crate::listlpt::completions(inst, sigmas)
}

/// Completion vectors reachable on one cluster, each with one order that
/// produces it, with dominated vectors removed.
fn pareto_front(inst: &Instance, cluster: usize) -> Vec<(Vec<Q>, Vec<usize>)> {
    let mut seen: HashMap<Vec<Q>, Vec<usize>> = HashMap::new();
    for_each_permutation(inst.n(), |sigma| {
        let c: Vec<Q> = cluster_completions(inst, cluster, sigma)
            .into_iter()
            .map(|c| c.unwrap_or_else(Q::zero))
            .collect();
        seen.entry(c).or_insert_with(|| sigma.to_vec());
    });
    let mut all: Vec<(Vec<Q>, Vec<usize>)> = seen.into_iter().collect();
    // deterministic order: by vector
    all.sort();
    let dominated = |a: &[Q], b: &[Q]| a != b && b.iter().zip(a).all(|(x, y)| x <= y);
    all.iter()
        .filter(|(a, _)| !all.iter().any(|(b, _)| dominated(a, b)))
        .cloned()
        .collect()
}

/// Best list schedule with an independent order per cluster.
pub fn best_multi_sigma(inst: &Instance) -> Result<(Vec<Permutation>, Q)> {
    best_multi_sigma_capped(inst, MULTI_SIGMA_CAP.0, MULTI_SIGMA_CAP.1)
}

pub fn best_multi_sigma_capped(inst: &Instance, n_cap: usize, m_cap: usize) -> Result<(Vec<Permutation>, Q)> {
    if inst.n() > n_cap {
        return Err(Error::InstanceTooLarge { size: inst.n(), cap: n_cap });
    }
    if inst.m() > m_cap {
        return Err(Error::InstanceTooLarge { size: inst.m(), cap: m_cap });
    }
    let n = inst.n();
    let weights: Vec<Q> = inst.jobs.iter().map(|j| j.weight.clone()).collect();
    let value = |c: &[Q]| c.iter().zip(&weights).fold(Q::zero(), |acc, (c, w)| acc + c * w);

    let mut fronts: Vec<Vec<(Vec<Q>, Vec<usize>)>> = (0..inst.m()).map(|i| pareto_front(inst, i)).collect();
    for f in &mut fronts {
        f.sort_by_cached_key(|(c, _)| value(c));
    }
    // floor[i]: componentwise maximum over clusters >= i of the componentwise
    // minimum of their fronts; a lower bound on what those clusters force.
    let mut floor = vec![vec![Q::zero(); n]; inst.m() + 1];
    for i in (0..inst.m()).rev() {
        let mut lo = fronts[i][0].0.clone();
        for (c, _) in &fronts[i] {
            for (l, x) in lo.iter_mut().zip(c) {
                if x < l {
                    *l = x.clone();
                }
            }
        }
        floor[i] = lo.into_iter().zip(&floor[i + 1]).map(|(a, b)| a.max(b.clone())).collect();
    }

    struct Search<'a> {
        fronts: &'a [Vec<(Vec<Q>, Vec<usize>)>],
        floor: &'a [Vec<Q>],
        weights: &'a [Q],
        choice: Vec<usize>,
        best: Option<(Vec<usize>, Q)>,
    }
    impl Search<'_> {
        fn bound(&self, cur: &[Q], i: usize) -> Q {
            cur.iter()
                .zip(&self.floor[i])
                .zip(self.weights)
                .fold(Q::zero(), |acc, ((a, b), w)| acc + w * if a > b { a } else { b })
        }

        fn descend(&mut self, cur: &[Q], i: usize) {
            let bound = self.bound(cur, i);
            if self.best.as_ref().is_some_and(|(_, b)| bound >= *b) {
                return;
            }
            if i == self.fronts.len() {
                self.best = Some((self.choice.clone(), bound));
                return;
            }
            for k in 0..self.fronts[i].len() {
                let next: Vec<Q> = cur
                    .iter()
                    .zip(&self.fronts[i][k].0)
                    .map(|(a, b)| if a > b { a.clone() } else { b.clone() })
                    .collect();
                self.choice.push(k);
                self.descend(&next, i + 1);
                self.choice.pop();
            }
        }
    }

    let mut search = Search {
        fronts: &fronts,
        floor: &floor,
        weights: &weights,
        choice: Vec::new(),
        best: None,
    };
    search.descend(&vec![Q::zero(); n], 0);
    let (choice, value) = search.best.expect("every front is nonempty");
    let sigmas = choice
        .iter()
        .enumerate()
        .map(|(i, &k)| Permutation::new(fronts[i][k].1.clone()))
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(list_lpt(inst, &sigmas).map(|s| s.objective).ok(), Some(value.clone()));
    Ok((sigmas, value))
}

/// An instance on which the best single order loses against independent
/// orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapWitness {
    pub instance: Instance,
    pub single: (Permutation, Q),
    pub multi: (Vec<Permutation>, Q),
    /// `single / multi`.
    pub gap: Q,
}

/// Single-order versus multi-order gap of one instance.
pub fn sigma_gap(inst: &Instance) -> Result<GapWitness> {
    let single = best_single_sigma(inst)?;
    let multi = best_multi_sigma(inst)?;
    let gap = ratio(&single.1, &multi.1);
    Ok(GapWitness {
        instance: inst.clone(),
        single,
        multi,
        gap,
    })
}

/// Randomised search for a large single-order gap over small unit-speed,
/// unit-weight instances. Each round draws a fresh instance and then tries
/// `climb` single-value mutations, keeping those that do not shrink the gap.
pub fn gap_search(seed: u64, rounds: usize, climb: usize) -> Result<GapWitness> {
    use crate::gen::{gap_candidate, mutate_gap_candidate};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<GapWitness> = None;
    for _ in 0..rounds {
        let mut cur = sigma_gap(&gap_candidate(&mut rng))?;
        for _ in 0..climb {
            let cand = sigma_gap(&mutate_gap_candidate(&cur.instance, &mut rng))?;
            if cand.gap >= cur.gap {
                cur = cand;
            }
        }
        if best.as_ref().is_none_or(|b| cur.gap > b.gap) {
            best = Some(cur);
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("need at least one round".into()))
}
