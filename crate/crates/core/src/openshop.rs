//! Concurrent open shop: one machine per cluster, jobs given by their
//! processing time on each machine. A job finishes when its last operation
//! does, and with a common job order every machine simply processes its
//! operations back to back.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Cluster, Instance, Job, Normalization, Permutation, Subjob};
use crate::rational::{Scalar, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdInstance {
    /// `x[j][i]`: processing time of job `j` on machine `i`.
    pub x: Vec<Vec<Q>>,
    pub weights: Vec<Q>,
}

impl PdInstance {
    pub fn new(x: Vec<Vec<Q>>, weights: Vec<Q>) -> Result<Self> {
        if x.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: weights.len(),
            });
        }
        let machines = x.first().map_or(1, Vec::len);
        if machines == 0 {
            return Err(Error::InvalidArgument("at least one machine is required".into()));
        }
        for (j, row) in x.iter().enumerate() {
            if row.len() != machines {
                return Err(Error::DimensionMismatch {
                    expected: machines,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| v.is_negative()) {
                return Err(Error::InvalidArgument(format!("job {j} has a negative processing time")));
            }
        }
        if let Some(j) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument(format!("job {j} has a non-positive weight")));
        }
        Ok(Self { x, weights })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn machines(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    /// The same problem as a cluster instance with one unit-speed machine
    /// per cluster and at most one task per subjob.
    pub fn to_instance(&self, name: &str) -> Instance {
        let m = self.machines().max(1);
        let clusters = vec![Cluster::new(vec![Q::from_integer(1.into())]); m];
        let jobs = self
            .x
            .iter()
            .zip(&self.weights)
            .map(|(row, w)| {
                let subjobs = (0..m)
                    .map(|i| match row.get(i) {
                        Some(v) if v.is_positive() => Subjob::new(vec![v.clone()], Q::zero()),
                        _ => Subjob::empty(),
                    })
                    .collect();
                Job::new(w.clone(), subjobs)
            })
            .collect();
        Instance::build(name, clusters, jobs, Normalization::Strict)
            .expect("open shop instance maps to a valid cluster instance")
    }

    pub fn x_f64(&self) -> Vec<Vec<f64>> {
        self.x.iter().map(|r| r.iter().map(f64::from_q).collect()).collect()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(f64::from_q).collect()
    }
}

/// Result of a MUSSQ run.
#[derive(Debug, Clone, PartialEq)]
pub struct MussqRun<T> {
    pub order: Permutation,
    /// Residual weights after the run (all zero for jobs that went through
    /// the ratio rule).
    pub residual: Vec<T>,
    /// Elementary steps performed, for complexity checks.
    pub ops: u64,
}

/// Primal-dual ordering for concurrent open shop.
///
/// The order is built back to front. Each round takes the machine with the
/// largest remaining load, and among the unscheduled jobs that use it the
/// one with the smallest residual weight per unit of processing there. That
/// job takes the last free slot and every remaining job's residual weight
/// is charged in proportion to its load on that machine. Jobs without any
/// processing go first. Machine ties go to the lowest index; job ties to the
/// highest, so that equal jobs end up in index order.
pub fn mussq(pd: &PdInstance) -> Permutation {
    mussq_run(&pd.x, &pd.weights).order
}

pub fn mussq_run<T: Scalar>(x: &[Vec<T>], weights: &[T]) -> MussqRun<T> {
    let n = x.len();
    let m = x.first().map_or(0, Vec::len);
    let mut ops = 0u64;
    let mut residual: Vec<T> = weights.to_vec();
    let mut active = vec![true; n];
    let mut front = Vec::new();
    for (j, row) in x.iter().enumerate() {
        ops += m as u64;
        if !row.iter().any(Scalar::is_pos) {
            front.push(j);
            active[j] = false;
        }
    }
    let mut loads = vec![T::zero(); m];
    for (j, row) in x.iter().enumerate() {
        if active[j] {
            for (l, v) in loads.iter_mut().zip(row) {
                *l = l.clone() + v.clone();
            }
        }
    }
    ops += (n * m) as u64;

    let mut back = Vec::with_capacity(n - front.len());
    let mut remaining = n - front.len();
    while remaining > 0 {
        let mut pick = pick_job(x, &residual, &active, &loads, &mut ops);
        if pick.is_none() {
            // float drift in the incremental loads; rebuild them
            loads = vec![T::zero(); m];
            for (j, row) in x.iter().enumerate() {
                if active[j] {
                    for (l, v) in loads.iter_mut().zip(row) {
                        *l = l.clone() + v.clone();
                    }
                }
            }
            pick = pick_job(x, &residual, &active, &loads, &mut ops);
        }
        let (machine, job) = pick.expect("an unscheduled job has work on the busiest machine");
        let theta = T::ratio(&residual[job], &x[job][machine]);
        for j in 0..n {
            if !active[j] {
                continue;
            }
            ops += 1;
            residual[j].sub_mul(&theta, &x[j][machine]);
            if residual[j].is_neg() {
                panic!("residual weight of job {j} became negative");
            }
            if residual[j] < T::zero() {
                residual[j] = T::zero();
            }
        }
        residual[job] = T::zero();
        active[job] = false;
        for (l, v) in loads.iter_mut().zip(&x[job]) {
            l.sub_mul(&T::one(), v);
        }
        ops += m as u64;
        back.push(job);
        remaining -= 1;
    }
    front.extend(back.into_iter().rev());
    MussqRun {
        order: Permutation::new(front).expect("every job is placed once"),
        residual,
        ops,
    }
}

fn pick_job<T: Scalar>(
    x: &[Vec<T>],
    residual: &[T],
    active: &[bool],
    loads: &[T],
    ops: &mut u64,
) -> Option<(usize, usize)> {
    let mut machine = 0;
    for (i, l) in loads.iter().enumerate() {
        if *l > loads[machine] {
            machine = i;
        }
    }
    *ops += loads.len() as u64;
    let mut best: Option<(usize, T)> = None;
    for (j, row) in x.iter().enumerate() {
        *ops += 1;
        if !active[j] || !row[machine].is_pos() {
            continue;
        }
        let ratio = T::ratio(&residual[j], &row[machine]);
        if best.as_ref().is_none_or(|(_, b)| ratio <= *b) {
            best = Some((j, ratio));
        }
    }
    best.map(|(j, _)| (machine, j))
}

/// Completion times under `sigma`: prefix sums per machine, maximised.
pub fn pd_completions(pd: &PdInstance, sigma: &Permutation) -> Vec<Q> {
    let mut prefix = vec![Q::zero(); pd.machines()];
    let mut c = vec![Q::zero(); pd.n()];
    for &j in sigma.as_slice() {
        let mut finish = Q::zero();
        for (acc, v) in prefix.iter_mut().zip(&pd.x[j]) {
            *acc += v;
            if v.is_positive() && *acc > finish {
                finish = acc.clone();
            }
        }
        c[j] = finish;
    }
    c
}

pub fn pd_objective(pd: &PdInstance, sigma: &Permutation) -> Q {
    pd_completions(pd, sigma)
        .iter()
        .zip(&pd.weights)
        .fold(Q::zero(), |acc, (c, w)| acc + c * w)
}

/// Default job cap for [`exact_pd`].
pub const EXACT_PD_CAP: usize = 9;

/// Optimal order by exhaustive enumeration over all `n!` permutations
/// (partial orders whose cost already reaches the incumbent are cut).
pub fn exact_pd(pd: &PdInstance) -> Result<(Permutation, Q)> {
    exact_pd_capped(pd, EXACT_PD_CAP)
}

pub fn exact_pd_capped(pd: &PdInstance, cap: usize) -> Result<(Permutation, Q)> {
    let n = pd.n();
    if n > cap {
        return Err(Error::InstanceTooLarge { size: n, cap });
    }
    let mut search = Enumeration {
        pd,
        used: vec![false; n],
        order: Vec::with_capacity(n),
        best: None,
    };
    let prefix = vec![Q::zero(); pd.machines()];
    search.descend(&prefix, &Q::zero());
    let (order, value) = search.best.unwrap_or((Vec::new(), Q::zero()));
    Ok((Permutation::new(order)?, value))
}

struct Enumeration<'a> {
    pd: &'a PdInstance,
    used: Vec<bool>,
    order: Vec<usize>,
    best: Option<(Vec<usize>, Q)>,
}

impl Enumeration<'_> {
    fn descend(&mut self, prefix: &[Q], cost: &Q) {
        if self.order.len() == self.pd.n() {
            if self.best.as_ref().is_none_or(|(_, b)| cost < b) {
                self.best = Some((self.order.clone(), cost.clone()));
            }
            return;
        }
        for j in 0..self.pd.n() {
            if self.used[j] {
                continue;
            }
            let mut next = prefix.to_vec();
            let mut finish = Q::zero();
            for (acc, v) in next.iter_mut().zip(&self.pd.x[j]) {
                *acc += v;
                if v.is_positive() && *acc > finish {
                    finish = acc.clone();
                }
            }
            let cost = cost + &self.pd.weights[j] * finish;
            if self.best.as_ref().is_some_and(|(_, b)| cost >= *b) {
                continue;
            }
            self.used[j] = true;
            self.order.push(j);
            self.descend(&next, &cost);
            self.order.pop();
            self.used[j] = false;
        }
    }
}
