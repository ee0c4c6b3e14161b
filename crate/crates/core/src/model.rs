//! Problem instances, derived constants, schedules and objective evaluation.
//!
//! An instance has `m` clusters of uniform machines and `n` jobs. Job `j`
//! owns one subjob per cluster; subjob `(j, i)` is a (possibly empty) list of
//! tasks that may run in parallel on the machines of cluster `i`, none of
//! them before the subjob's release time. A job completes when its last task
//! completes, and the objective is the weighted sum of job completion times.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    /// Machine speeds, fastest first.
    pub speeds: Vec<Q>,
}

impl Cluster {
    pub fn new(speeds: Vec<Q>) -> Self {
        Self { speeds }
    }

    pub fn machines(&self) -> usize {
        self.speeds.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subjob {
    /// Task processing requirements, longest first.
    pub tasks: Vec<Q>,
    pub release: Q,
}

impl Subjob {
    pub fn new(tasks: Vec<Q>, release: Q) -> Self {
        Self { tasks, release }
    }

    pub fn empty() -> Self {
        Self {
            tasks: Vec::new(),
            release: Q::zero(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn total(&self) -> Q {
        self.tasks.iter().fold(Q::zero(), |acc, p| acc + p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub weight: Q,
    /// One entry per cluster.
    pub subjobs: Vec<Subjob>,
}

impl Job {
    pub fn new(weight: Q, subjobs: Vec<Subjob>) -> Self {
        Self { weight, subjobs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub clusters: Vec<Cluster>,
    pub jobs: Vec<Job>,
}

/// How [`Instance::build`] treats unsorted speed and task lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Reject any violation.
    Strict,
    /// Sort speeds and tasks non-increasing and zero the release of empty
    /// subjobs, then reject whatever is still violated.
    Sort,
}

/// One failed invariant, located by a path such as `jobs[2].subjobs[0].tasks`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn non_increasing(xs: &[Q]) -> bool {
    xs.windows(2).all(|w| w[0] >= w[1])
}

/// Reports every invariant violation of `instance`. Never fails.
pub fn validate(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if instance.clusters.is_empty() {
        out.push(Violation::new("clusters", "instance has no clusters"));
    }
    for (i, c) in instance.clusters.iter().enumerate() {
        let path = format!("clusters[{i}]");
        if c.speeds.is_empty() {
            out.push(Violation::new(&path, "cluster has no machines"));
        }
        for (l, v) in c.speeds.iter().enumerate() {
            if *v < Q::one() {
                out.push(Violation::new(
                    format!("{path}.speeds[{l}]"),
                    format!("speed {} is below 1", format_q(v)),
                ));
            }
        }
        if !non_increasing(&c.speeds) {
            out.push(Violation::new(&path, "speeds not non-increasing"));
        }
    }
    let m = instance.clusters.len();
    for (j, job) in instance.jobs.iter().enumerate() {
        let path = format!("jobs[{j}]");
        if !job.weight.is_positive() {
            out.push(Violation::new(
                format!("{path}.weight"),
                format!("weight {} must be positive", format_q(&job.weight)),
            ));
        }
        if job.subjobs.len() != m {
            out.push(Violation::new(
                format!("{path}.subjobs"),
                format!("expected {m} subjobs, found {}", job.subjobs.len()),
            ));
        }
        for (i, s) in job.subjobs.iter().enumerate() {
            let sp = format!("{path}.subjobs[{i}]");
            for (t, p) in s.tasks.iter().enumerate() {
                if !p.is_positive() {
                    out.push(Violation::new(
                        format!("{sp}.tasks[{t}]"),
                        format!("processing time {} must be positive", format_q(p)),
                    ));
                }
            }
            if !non_increasing(&s.tasks) {
                out.push(Violation::new(
                    format!("{sp}.tasks"),
                    "tasks not non-increasing",
                ));
            }
            if s.release.is_negative() {
                out.push(Violation::new(
                    format!("{sp}.release"),
                    "release time must be nonnegative",
                ));
            } else if s.tasks.is_empty() && !s.release.is_zero() {
                out.push(Violation::new(
                    format!("{sp}.release"),
                    "empty subjob must have release 0",
                ));
            }
        }
    }
    out
}

impl Instance {
    /// Assembles an instance and checks it.
    pub fn build(
        name: impl Into<String>,
        clusters: Vec<Cluster>,
        jobs: Vec<Job>,
        mode: Normalization,
    ) -> Result<Self> {
        let mut inst = Self {
            name: name.into(),
            clusters,
            jobs,
        };
        if mode == Normalization::Sort {
            inst.normalize();
        }
        let violations = validate(&inst);
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    /// Sorts speeds and tasks non-increasing and clears releases of empty
    /// subjobs. Returns whether anything changed.
    pub fn normalize(&mut self) -> bool {
        let mut changed = false;
        for c in &mut self.clusters {
            if !non_increasing(&c.speeds) {
                c.speeds.sort_by(|a, b| b.cmp(a));
                changed = true;
            }
        }
        for job in &mut self.jobs {
            for s in &mut job.subjobs {
                if !non_increasing(&s.tasks) {
                    s.tasks.sort_by(|a, b| b.cmp(a));
                    changed = true;
                }
                if s.tasks.is_empty() && !s.release.is_zero() {
                    s.release = Q::zero();
                    changed = true;
                }
            }
        }
        changed
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn m(&self) -> usize {
        self.clusters.len()
    }

    pub fn subjob(&self, job: usize, cluster: usize) -> &Subjob {
        &self.jobs[job].subjobs[cluster]
    }

    /// True when every cluster is a single machine.
    pub fn is_single_machine_clusters(&self) -> bool {
        self.clusters.iter().all(|c| c.machines() == 1)
    }

    /// All releases of nonempty subjobs are zero.
    pub fn has_zero_releases(&self) -> bool {
        self.jobs
            .iter()
            .flat_map(|j| &j.subjobs)
            .all(|s| s.tasks.is_empty() || s.release.is_zero())
    }

    /// Releases of nonempty subjobs, as `(job, cluster)` of the first positive one.
    pub fn first_positive_release(&self) -> Option<(usize, usize)> {
        self.jobs.iter().enumerate().find_map(|(j, job)| {
            job.subjobs
                .iter()
                .position(|s| !s.tasks.is_empty() && s.release.is_positive())
                .map(|i| (j, i))
        })
    }
}

/// The per-cluster and per-subjob constants the LP and the bounds refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedConstants {
    /// Total speed of cluster `i`.
    pub mu: Vec<Q>,
    /// `q[j][i] = min(|T_ji|, m_i)`.
    pub q: Vec<Vec<usize>>,
    /// Sum of the `q[j][i]` fastest speeds of cluster `i`.
    pub mu_ji: Vec<Vec<Q>>,
    /// Total processing of subjob `(j, i)`.
    pub p: Vec<Vec<Q>>,
    /// Longest task of subjob `(j, i)`, zero when empty.
    pub p_first: Vec<Vec<Q>>,
    /// Fastest speed of cluster `i`.
    pub v1: Vec<Q>,
    /// Average speed `mu_i / m_i`.
    pub vbar: Vec<Q>,
    /// `v1_i / vbar_i`.
    pub r_i: Vec<Q>,
    /// Largest `r_i`.
    pub r: Q,
}

impl DerivedConstants {
    /// Largest of the two simple completion-time lower bounds of subjob
    /// `(j, i)`: `p_first/v1 + r` and `p/mu_ji + r`. `None` for empty subjobs.
    pub fn subjob_lower_bound(&self, inst: &Instance, j: usize, i: usize) -> Option<Q> {
        if self.q[j][i] == 0 {
            return None;
        }
        let r = &inst.jobs[j].subjobs[i].release;
        let b = &self.p_first[j][i] / &self.v1[i] + r;
        let c = &self.p[j][i] / &self.mu_ji[j][i] + r;
        Some(if b >= c { b } else { c })
    }

    /// Largest subjob lower bound of job `j`, zero if it has no tasks.
    pub fn job_lower_bound(&self, inst: &Instance, j: usize) -> Q {
        (0..inst.m())
            .filter_map(|i| self.subjob_lower_bound(inst, j, i))
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// Computes [`DerivedConstants`] for a valid instance.
pub fn derive(instance: &Instance) -> DerivedConstants {
    let m = instance.m();
    let mut mu = Vec::with_capacity(m);
    let mut v1 = Vec::with_capacity(m);
    let mut vbar = Vec::with_capacity(m);
    let mut r_i = Vec::with_capacity(m);
    // prefix[i][k] = sum of the k fastest speeds
    let mut prefix: Vec<Vec<Q>> = Vec::with_capacity(m);
    for c in &instance.clusters {
        let mut pre = vec![Q::zero()];
        for v in &c.speeds {
            let next = pre.last().unwrap() + v;
            pre.push(next);
        }
        let total = pre.last().unwrap().clone();
        let avg = &total / Q::from_integer(c.machines().into());
        let fastest = c.speeds.first().cloned().unwrap_or_else(Q::one);
        r_i.push(&fastest / &avg);
        v1.push(fastest);
        vbar.push(avg);
        mu.push(total);
        prefix.push(pre);
    }
    let r = r_i.iter().max().cloned().unwrap_or_else(Q::one);

    let n = instance.n();
    let mut q = vec![vec![0usize; m]; n];
    let mut mu_ji = vec![vec![Q::zero(); m]; n];
    let mut p = vec![vec![Q::zero(); m]; n];
    let mut p_first = vec![vec![Q::zero(); m]; n];
    for (j, job) in instance.jobs.iter().enumerate() {
        for (i, s) in job.subjobs.iter().enumerate() {
            let cap = s.tasks.len().min(instance.clusters[i].machines());
            q[j][i] = cap;
            mu_ji[j][i] = prefix[i][cap].clone();
            p[j][i] = s.total();
            p_first[j][i] = s.tasks.first().cloned().unwrap_or_else(Q::zero);
        }
    }
    DerivedConstants {
        mu,
        q,
        mu_ji,
        p,
        p_first,
        v1,
        vbar,
        r_i,
        r,
    }
}

/// A bijection on `0..n` listing jobs in processing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &j in &order {
            if j >= n || seen[j] {
                return Err(Error::InvalidArgument(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            seen[j] = true;
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// `positions()[j]` is the slot of job `j`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (k, &j) in self.0.iter().enumerate() {
            pos[j] = k;
        }
        pos
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub job: usize,
    pub cluster: usize,
    pub machine: usize,
    /// Index into the subjob's (sorted) task list.
    pub task: usize,
    pub start: Q,
    pub end: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
    /// `C_j` per job.
    pub completion: Vec<Q>,
    pub objective: Q,
}

impl Schedule {
    /// Checks `assignments` against `instance` and fills in completions and
    /// the objective.
    pub fn from_assignments(instance: &Instance, assignments: Vec<Assignment>) -> Result<Self> {
        let (objective, completion) = evaluate_assignments(instance, &assignments)?;
        Ok(Self {
            assignments,
            completion,
            objective,
        })
    }
}

/// Recomputes completion times and the objective of `schedule`, rejecting
/// schedules that break machine, release or duration constraints.
pub fn evaluate(instance: &Instance, schedule: &Schedule) -> Result<(Q, Vec<Q>)> {
    evaluate_assignments(instance, &schedule.assignments)
}

fn evaluate_assignments(instance: &Instance, assignments: &[Assignment]) -> Result<(Q, Vec<Q>)> {
    let infeasible = |msg: String| Err(Error::InfeasibleSchedule(msg));
    let n = instance.n();
    let m = instance.m();
    let mut placed: Vec<Vec<Vec<bool>>> = instance
        .jobs
        .iter()
        .map(|job| job.subjobs.iter().map(|s| vec![false; s.tasks.len()]).collect())
        .collect();
    let mut completion = vec![Q::zero(); n];
    // (start, end, index) per machine
    let mut per_machine: Vec<Vec<Vec<(&Q, &Q, usize)>>> = instance
        .clusters
        .iter()
        .map(|c| vec![Vec::new(); c.machines()])
        .collect();

    for (k, a) in assignments.iter().enumerate() {
        if a.job >= n || a.cluster >= m {
            return infeasible(format!("assignment {k} refers to job {} cluster {}", a.job, a.cluster));
        }
        let sub = instance.subjob(a.job, a.cluster);
        let speeds = &instance.clusters[a.cluster].speeds;
        if a.task >= sub.tasks.len() || a.machine >= speeds.len() {
            return infeasible(format!(
                "assignment {k}: task {} / machine {} out of range for subjob ({}, {})",
                a.task, a.machine, a.job, a.cluster
            ));
        }
        let flag = &mut placed[a.job][a.cluster][a.task];
        if *flag {
            return infeasible(format!(
                "task {} of subjob ({}, {}) assigned twice",
                a.task, a.job, a.cluster
            ));
        }
        *flag = true;
        if a.start < sub.release {
            return infeasible(format!(
                "task {} of subjob ({}, {}) starts at {} before release {}",
                a.task,
                a.job,
                a.cluster,
                format_q(&a.start),
                format_q(&sub.release)
            ));
        }
        let duration = &sub.tasks[a.task] / &speeds[a.machine];
        if &a.end - &a.start != duration {
            return infeasible(format!(
                "task {} of subjob ({}, {}) runs {} but needs {}",
                a.task,
                a.job,
                a.cluster,
                format_q(&(&a.end - &a.start)),
                format_q(&duration)
            ));
        }
        if a.end > completion[a.job] {
            completion[a.job] = a.end.clone();
        }
        per_machine[a.cluster][a.machine].push((&a.start, &a.end, k));
    }

    for (j, job) in placed.iter().enumerate() {
        for (i, tasks) in job.iter().enumerate() {
            if let Some(t) = tasks.iter().position(|&b| !b) {
                return infeasible(format!("task {t} of subjob ({j}, {i}) is not scheduled"));
            }
        }
    }
    for (i, machines) in per_machine.iter_mut().enumerate() {
        for (l, slots) in machines.iter_mut().enumerate() {
            slots.sort_by(|a, b| a.0.cmp(b.0).then(a.1.cmp(b.1)));
            for w in slots.windows(2) {
                if w[1].0 < w[0].1 {
                    return infeasible(format!(
                        "assignments {} and {} overlap on machine {l} of cluster {i}",
                        w[0].2, w[1].2
                    ));
                }
            }
        }
    }

    let objective = instance
        .jobs
        .iter()
        .zip(&completion)
        .fold(Q::zero(), |acc, (job, c)| acc + &job.weight * c);
    Ok((objective, completion))
}
