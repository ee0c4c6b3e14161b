//! Total weighted lateness on identical machines, and its reduction to a
//! cluster instance with one extra single-machine cluster per job.
//!
//! In the reduced instance job `j` has its deadline as work on a private
//! cluster, so it cannot finish before `d_j` and its completion is
//! `max(C_j, d_j) = d_j + (C_j - d_j)^+`. Weighted sums differ by the constant
//! `sum w_j d_j`, hence optimal orders carry over.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::listlpt::{cluster_completions, completions, weighted_sum};
use crate::model::{Cluster, Instance, Job, Normalization, Permutation, Subjob};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatenessInstance {
    pub p: Vec<Q>,
    pub d: Vec<Q>,
    pub w: Vec<Q>,
    pub m: usize,
}

impl LatenessInstance {
    pub fn new(p: Vec<Q>, d: Vec<Q>, w: Vec<Q>, m: usize) -> Result<Self> {
        let li = Self { p, d, w, m };
        li.validate()?;
        Ok(li)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.p.len();
        for len in [self.d.len(), self.w.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        if self.m == 0 {
            return Err(Error::InvalidArgument("need at least one machine".into()));
        }
        if let Some(j) = self.p.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidArgument(format!("p[{j}] must be positive")));
        }
        if let Some(j) = self.d.iter().position(|v| v.is_negative()) {
            return Err(Error::InvalidArgument(format!("d[{j}] must be non-negative")));
        }
        if let Some(j) = self.w.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidArgument(format!("w[{j}] must be positive")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// The machines alone, as a one-cluster instance.
    fn machines_only(&self) -> Instance {
        Instance {
            name: "lateness".into(),
            clusters: vec![Cluster::new(vec![Q::one(); self.m])],
            jobs: self
                .p
                .iter()
                .zip(&self.w)
                .map(|(p, w)| Job::new(w.clone(), vec![Subjob::new(vec![p.clone()], Q::zero())]))
                .collect(),
        }
    }
}

/// Cluster 0 holds the `m` machines; cluster `j + 1` is a single machine on
/// which only job `j` has work, namely `d_j` (nothing if `d_j = 0`).
pub fn reduce_lateness(li: &LatenessInstance) -> Result<Instance> {
    li.validate()?;
    let n = li.n();
    let mut clusters = vec![Cluster::new(vec![Q::one(); li.m])];
    clusters.extend((0..n).map(|_| Cluster::new(vec![Q::one()])));
    let jobs = (0..n)
        .map(|j| {
            let mut subjobs = vec![Subjob::new(vec![li.p[j].clone()], Q::zero())];
            subjobs.extend((0..n).map(|k| {
                if k == j && li.d[j].is_positive() {
                    Subjob::new(vec![li.d[j].clone()], Q::zero())
                } else {
                    Subjob::empty()
                }
            }));
            Job::new(li.w[j].clone(), subjobs)
        })
        .collect();
    Instance::build("lateness-reduced", clusters, jobs, Normalization::Strict)
}

/// Completion times of list scheduling on the machines in order `sigma`.
pub fn lateness_completions(li: &LatenessInstance, sigma: &Permutation) -> Result<Vec<Q>> {
    if sigma.len() != li.n() {
        return Err(Error::DimensionMismatch {
            expected: li.n(),
            found: sigma.len(),
        });
    }
    Ok(cluster_completions(&li.machines_only(), 0, sigma.as_slice())
        .into_iter()
        .map(|c| c.expect("every job has positive work"))
        .collect())
}

/// `sum_j w_j max(C_j - d_j, 0)` of the list schedule in order `sigma`.
pub fn lateness_objective(li: &LatenessInstance, sigma: &Permutation) -> Result<Q> {
    let c = lateness_completions(li, sigma)?;
    Ok(c.iter()
        .zip(&li.d)
        .zip(&li.w)
        .fold(Q::zero(), |acc, ((c, d), w)| {
            let late = c - d;
            if late.is_positive() {
                acc + w * late
            } else {
                acc
            }
        }))
}

/// CC objective of the reduced instance when every cluster follows `sigma`.
pub fn reduced_objective(reduced: &Instance, sigma: &Permutation) -> Q {
    let order = vec![sigma.as_slice(); reduced.m()];
    weighted_sum(reduced, &completions(reduced, &order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn reduction_shape() {
        let li = LatenessInstance::new(ints(&[2]), ints(&[3]), ints(&[1]), 1).unwrap();
        let r = reduce_lateness(&li).unwrap();
        assert_eq!(r.m(), 2);
        assert_eq!(r.jobs[0].subjobs[0].tasks, ints(&[2]));
        assert_eq!(r.jobs[0].subjobs[1].tasks, ints(&[3]));

        let li = LatenessInstance::new(ints(&[1, 2, 3]), ints(&[0, 5, 1]), ints(&[1, 1, 1]), 2).unwrap();
        let r = reduce_lateness(&li).unwrap();
        assert_eq!(r.m(), 4);
        for i in 1..4 {
            let busy = r.jobs.iter().filter(|j| !j.subjobs[i].is_empty()).count();
            assert_eq!(busy, usize::from(i != 1));
        }
    }

    #[test]
    fn lateness_examples() {
        let li = LatenessInstance::new(ints(&[2, 2]), ints(&[2, 4]), ints(&[1, 1]), 1).unwrap();
        let s = Permutation::identity(2);
        assert_eq!(lateness_completions(&li, &s).unwrap(), ints(&[2, 4]));
        assert_eq!(lateness_objective(&li, &s).unwrap(), int(0));
        let s = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(lateness_completions(&li, &s).unwrap(), ints(&[4, 2]));
        assert_eq!(lateness_objective(&li, &s).unwrap(), int(2));
    }

    #[test]
    fn objective_identity() {
        let li = LatenessInstance::new(ints(&[3, 1, 2]), ints(&[1, 0, 4]), ints(&[2, 1, 3]), 2).unwrap();
        let r = reduce_lateness(&li).unwrap();
        let wd: Q = li.w.iter().zip(&li.d).map(|(w, d)| w * d).sum();
        for order in [[0, 1, 2], [2, 1, 0], [1, 2, 0]] {
            let s = Permutation::new(order.to_vec()).unwrap();
            assert_eq!(reduced_objective(&r, &s), &wd + lateness_objective(&li, &s).unwrap());
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(LatenessInstance::new(ints(&[0]), ints(&[1]), ints(&[1]), 1).is_err());
        assert!(LatenessInstance::new(ints(&[1]), ints(&[-1]), ints(&[1]), 1).is_err());
        assert!(LatenessInstance::new(ints(&[1]), ints(&[1]), ints(&[1]), 0).is_err());
        assert!(LatenessInstance::new(ints(&[1]), ints(&[1, 2]), ints(&[1]), 1).is_err());
    }
}
