//! SWAG: the greedy "smallest potential makespan first" baseline, and the
//! instance family on which its ratio grows without bound.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::listlpt::list_lpt_single;
use crate::model::{derive, Cluster, Instance, Job, Normalization, Permutation, Schedule, Subjob};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwagTrace {
    pub order: Permutation,
    /// Queue lengths after each pick (one entry per cluster).
    pub queue_history: Vec<Vec<Q>>,
    /// Candidate makespans at each round, `None` for jobs already picked.
    pub makespan_history: Vec<Vec<Option<Q>>>,
}

/// Each round picks the unscheduled job minimising
/// `max_i (q_i + p_ji) / m_i` (lowest index on ties) and adds its work to the
/// queues. Speeds are ignored, as in the original heuristic.
pub fn swag(inst: &Instance) -> SwagTrace {
    let d = derive(inst);
    let n = inst.n();
    let machines: Vec<Q> = inst
        .clusters
        .iter()
        .map(|c| Q::from_integer(c.machines().into()))
        .collect();
    let mut queue = vec![Q::zero(); inst.m()];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue_history = Vec::with_capacity(n);
    let mut makespan_history = Vec::with_capacity(n);

    for _ in 0..n {
        let spans: Vec<Option<Q>> = (0..n)
            .map(|j| {
                (!done[j]).then(|| {
                    (0..inst.m())
                        .map(|i| (&queue[i] + &d.p[j][i]) / &machines[i])
                        .max()
                        .unwrap_or_else(Q::zero)
                })
            })
            .collect();
        let mut pick: Option<(usize, &Q)> = None;
        for (j, s) in spans.iter().enumerate() {
            if let Some(s) = s {
                if pick.is_none_or(|(_, best)| s < best) {
                    pick = Some((j, s));
                }
            }
        }
        let (j, _) = pick.expect("an unscheduled job remains");
        done[j] = true;
        order.push(j);
        for (q, p) in queue.iter_mut().zip(&d.p[j]) {
            *q += p;
        }
        queue_history.push(queue.clone());
        makespan_history.push(spans);
    }

    SwagTrace {
        order: Permutation::new(order).expect("each job picked once"),
        queue_history,
        makespan_history,
    }
}

/// SWAG order list-scheduled on every cluster.
pub fn swag_schedule(inst: &Instance) -> Result<(SwagTrace, Schedule)> {
    let trace = swag(inst);
    let schedule = list_lpt_single(inst, &trace.order)?;
    Ok((trace, schedule))
}

fn check_eps(l: usize, eps: &Q) -> Result<()> {
    if l == 0 {
        return Err(Error::BadParams("L must be positive".into()));
    }
    if !eps.is_positive() || eps * Q::from_integer(l.into()) >= Q::one() {
        return Err(Error::BadEpsilon);
    }
    Ok(())
}

/// `m` single-machine clusters; `m` jobs with work `p` on their own cluster
/// only, followed by `l` jobs with work `p (1 - eps)` everywhere. Unit
/// weights.
pub fn gen_adversarial(m: usize, l: usize, p: &Q, eps: &Q) -> Result<Instance> {
    check_eps(l, eps)?;
    if m == 0 || !p.is_positive() {
        return Err(Error::BadParams("need m >= 1 and p > 0".into()));
    }
    let short = p * (Q::one() - eps);
    let mut jobs = Vec::with_capacity(m + l);
    for j in 0..m {
        jobs.push(Job::new(
            Q::one(),
            (0..m)
                .map(|i| if i == j { Subjob::new(vec![p.clone()], Q::zero()) } else { Subjob::empty() })
                .collect(),
        ));
    }
    for _ in 0..l {
        jobs.push(Job::new(
            Q::one(),
            (0..m).map(|_| Subjob::new(vec![short.clone()], Q::zero())).collect(),
        ));
    }
    Instance::build(
        format!("swag-adversarial-m{m}-L{l}"),
        (0..m).map(|_| Cluster::new(vec![Q::one()])).collect(),
        jobs,
        Normalization::Strict,
    )
}

/// Closed forms of SWAG's objective and of the schedule that runs the
/// single-cluster jobs first.
pub fn adversarial_objectives(m: usize, l: usize, p: &Q, eps: &Q) -> Result<(Q, Q)> {
    check_eps(l, eps)?;
    let mq = Q::from_integer(m.into());
    let lq = Q::from_integer(l.into());
    let short = p * (Q::one() - eps);
    let tri = &short * &lq * (&lq + Q::one()) / Q::from_integer(2.into());
    let swag = &tri + &short * &lq * &mq + p * &mq;
    let alt = tri + p * lq + p * mq;
    Ok((swag, alt))
}
