//! List-LPT: turn a job order into a task-level schedule on one cluster.
//!
//! Subjobs are visited in permutation order and their tasks longest first.
//! Each task goes to the machine on which it would finish earliest, starting
//! no earlier than that machine's frontier and the cluster's release barrier.
//! The barrier is the largest release among the subjobs visited so far, so
//! idle time is only ever inserted on all machines at once.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, Permutation, Schedule};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ListLptOptions {
    /// Let a task start inside an earlier idle gap of a machine, as soon as
    /// its own subjob is released, instead of appending after the frontier
    /// and barrier. The completion-time bounds are only certified for the
    /// default (`false`).
    pub gap_filling: bool,
}

/// Placement of every task of one cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSchedule {
    pub cluster: usize,
    pub assignments: Vec<Assignment>,
    /// Completion of subjob `(j, cluster)`, `None` for empty subjobs.
    pub subjob_completion: Vec<Option<Q>>,
}

fn check_sigma(inst: &Instance, sigma: &Permutation) -> Result<()> {
    if sigma.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            found: sigma.len(),
        });
    }
    Ok(())
}

/// Earliest start `>= earliest` at which a slot of length `dur` is free.
fn earliest_fit(busy: &[(Q, Q)], earliest: &Q, dur: &Q) -> Q {
    let mut cur = earliest.clone();
    for (s, e) in busy {
        if *e <= cur {
            continue;
        }
        if *s >= &cur + dur {
            break;
        }
        if *e > cur {
            cur = e.clone();
        }
    }
    cur
}

fn place(
    inst: &Instance,
    cluster: usize,
    sigma: &[usize],
    opts: ListLptOptions,
    mut record: Option<&mut Vec<Assignment>>,
) -> Vec<Option<Q>> {
    let speeds = &inst.clusters[cluster].speeds;
    let mut frontier = vec![Q::zero(); speeds.len()];
    let mut busy: Vec<Vec<(Q, Q)>> = vec![Vec::new(); if opts.gap_filling { speeds.len() } else { 0 }];
    let mut barrier = Q::zero();
    let mut done = vec![None; inst.n()];

    for &j in sigma {
        let sub = inst.subjob(j, cluster);
        if sub.tasks.is_empty() {
            continue;
        }
        if sub.release > barrier {
            barrier = sub.release.clone();
        }
        let mut finish = Q::zero();
        for (t, p) in sub.tasks.iter().enumerate() {
            let mut best: Option<(usize, Q, Q)> = None;
            for (l, v) in speeds.iter().enumerate() {
                let dur = p / v;
                let start = if opts.gap_filling {
                    earliest_fit(&busy[l], &sub.release, &dur)
                } else if frontier[l] > barrier {
                    frontier[l].clone()
                } else {
                    barrier.clone()
                };
                let end = &start + &dur;
                if best.as_ref().is_none_or(|(_, _, e)| end < *e) {
                    best = Some((l, start, end));
                }
            }
            let (l, start, end) = best.expect("cluster has at least one machine");
            if opts.gap_filling {
                let pos = busy[l].partition_point(|(s, _)| *s < start);
                busy[l].insert(pos, (start.clone(), end.clone()));
            } else {
                frontier[l] = end.clone();
            }
            if end > finish {
                finish = end.clone();
            }
            if let Some(out) = record.as_deref_mut() {
                out.push(Assignment {
                    job: j,
                    cluster,
                    machine: l,
                    task: t,
                    start,
                    end,
                });
            }
        }
        done[j] = Some(finish);
    }
    done
}

/// Schedules cluster `cluster` by List-LPT in the order `sigma`.
pub fn list_lpt_cluster(inst: &Instance, cluster: usize, sigma: &Permutation) -> Result<ClusterSchedule> {
    list_lpt_cluster_with(inst, cluster, sigma, ListLptOptions::default())
}

pub fn list_lpt_cluster_with(
    inst: &Instance,
    cluster: usize,
    sigma: &Permutation,
    opts: ListLptOptions,
) -> Result<ClusterSchedule> {
    check_sigma(inst, sigma)?;
    if cluster >= inst.m() {
        return Err(Error::InvalidArgument(format!("no cluster {cluster}")));
    }
    let mut assignments = Vec::new();
    let subjob_completion = place(inst, cluster, sigma.as_slice(), opts, Some(&mut assignments));
    Ok(ClusterSchedule {
        cluster,
        assignments,
        subjob_completion,
    })
}

/// Schedules every cluster with its own permutation and evaluates the result.
pub fn list_lpt(inst: &Instance, sigmas: &[Permutation]) -> Result<Schedule> {
    list_lpt_with(inst, sigmas, ListLptOptions::default())
}

pub fn list_lpt_with(inst: &Instance, sigmas: &[Permutation], opts: ListLptOptions) -> Result<Schedule> {
    if sigmas.len() != inst.m() {
        return Err(Error::DimensionMismatch {
            expected: inst.m(),
            found: sigmas.len(),
        });
    }
    let mut assignments = Vec::new();
    for (i, sigma) in sigmas.iter().enumerate() {
        assignments.extend(list_lpt_cluster_with(inst, i, sigma, opts)?.assignments);
    }
    Schedule::from_assignments(inst, assignments)
}

/// Uses the same permutation on every cluster.
pub fn list_lpt_single(inst: &Instance, sigma: &Permutation) -> Result<Schedule> {
    list_lpt(inst, &vec![sigma.clone(); inst.m()])
}

/// Subjob completion times of cluster `cluster` without materialising
/// assignments. Indexed by job.
pub fn cluster_completions(inst: &Instance, cluster: usize, sigma: &[usize]) -> Vec<Option<Q>> {
    place(inst, cluster, sigma, ListLptOptions::default(), None)
}

/// Job completion times for per-cluster orders, without building a schedule.
pub fn completions(inst: &Instance, sigmas: &[&[usize]]) -> Vec<Q> {
    let mut c = vec![Q::zero(); inst.n()];
    for (i, sigma) in sigmas.iter().enumerate() {
        for (j, done) in cluster_completions(inst, i, sigma).into_iter().enumerate() {
            if let Some(t) = done {
                if t > c[j] {
                    c[j] = t;
                }
            }
        }
    }
    c
}

/// Weighted completion time of the given job completion vector.
pub fn weighted_sum(inst: &Instance, completion: &[Q]) -> Q {
    inst.jobs
        .iter()
        .zip(completion)
        .fold(Q::zero(), |acc, (job, c)| acc + &job.weight * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Cluster, Job, Normalization, Subjob};
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn one_cluster(speeds: &[i64], jobs: &[(&[i64], i64)]) -> Instance {
        Instance::build(
            "t",
            vec![Cluster::new(ints(speeds))],
            jobs.iter()
                .map(|(tasks, r)| Job::new(int(1), vec![Subjob::new(ints(tasks), int(*r))]))
                .collect(),
            Normalization::Strict,
        )
        .unwrap()
    }

    #[test]
    fn serial_stacking_on_one_machine() {
        let inst = one_cluster(&[1], &[(&[2], 0), (&[3], 0)]);
        let s = list_lpt_single(&inst, &Permutation::identity(2)).unwrap();
        assert_eq!(s.completion, ints(&[2, 5]));
    }

    #[test]
    fn greedy_earliest_end_on_two_machines() {
        let inst = one_cluster(&[1, 1], &[(&[3, 2, 2], 0)]);
        let cs = list_lpt_cluster(&inst, 0, &Permutation::identity(1)).unwrap();
        let ends: Vec<Q> = cs.assignments.iter().map(|a| a.end.clone()).collect();
        assert_eq!(ends, ints(&[3, 2, 4]));
        assert_eq!(cs.subjob_completion[0], Some(int(4)));
    }

    #[test]
    fn release_barrier_delays_start() {
        let inst = one_cluster(&[1], &[(&[2], 5)]);
        let cs = list_lpt_cluster(&inst, 0, &Permutation::identity(1)).unwrap();
        assert_eq!(cs.assignments[0].start, int(5));
        assert_eq!(cs.subjob_completion[0], Some(int(7)));
    }

    #[test]
    fn barrier_holds_for_later_subjobs() {
        // Job 1 is released at time 0 but follows job 0 (released at 4), so
        // it may not use the idle machine before 4.
        let inst = one_cluster(&[1, 1], &[(&[1], 4), (&[1], 0)]);
        let s = list_lpt_single(&inst, &Permutation::identity(2)).unwrap();
        assert_eq!(s.completion, ints(&[5, 5]));
        let gap = list_lpt_with(
            &inst,
            &[Permutation::identity(2)],
            ListLptOptions { gap_filling: true },
        )
        .unwrap();
        assert_eq!(gap.completion, ints(&[5, 1]));
    }

    #[test]
    fn faster_machine_wins_ties_resolve_low_index() {
        let inst = one_cluster(&[2, 1], &[(&[2, 1], 0)]);
        let cs = list_lpt_cluster(&inst, 0, &Permutation::identity(1)).unwrap();
        // task 2 ends at 1 on machine 0; task 1 ends at 1.5 on machine 0 or 1 on machine 1
        assert_eq!(cs.assignments[0].machine, 0);
        assert_eq!(cs.assignments[0].end, int(1));
        assert_eq!(cs.assignments[1].machine, 1);
        assert_eq!(cs.assignments[1].end, int(1));
    }

    #[test]
    fn empty_jobs_complete_at_zero() {
        let inst = Instance::build(
            "t",
            vec![Cluster::new(ints(&[1])), Cluster::new(ints(&[1, 1]))],
            vec![
                Job::new(int(1), vec![Subjob::empty(), Subjob::empty()]),
                Job::new(int(1), vec![Subjob::new(ints(&[2]), int(0)), Subjob::empty()]),
            ],
            Normalization::Strict,
        )
        .unwrap();
        let s = list_lpt_single(&inst, &Permutation::identity(2)).unwrap();
        assert_eq!(s.completion, ints(&[0, 2]));
    }

    #[test]
    fn wrong_permutation_length_is_rejected() {
        let inst = one_cluster(&[1], &[(&[2], 0), (&[3], 0)]);
        assert!(list_lpt_single(&inst, &Permutation::identity(3)).is_err());
        assert!(list_lpt(&inst, &[]).is_err());
    }
}
