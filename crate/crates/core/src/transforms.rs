//! Reductions from cluster scheduling to concurrent open shop and the
//! single-order algorithms built on them.
//!
//! The plain transform replaces every subjob by its total processing divided
//! by the cluster's total speed. The augmented transform additionally gives
//! each job a private machine whose processing time is a lower bound on the
//! job's completion time, which steers the primal-dual ordering away from
//! jobs that merely look short after aggregation.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::listlpt::list_lpt_single;
use crate::model::{derive, Instance, Permutation, Schedule};
use crate::openshop::{mussq, PdInstance};
use crate::rational::Q;
use crate::verify::{certificate_for, RatioCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Tspt,
    Atspt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformRecord {
    pub source: Instance,
    pub kind: TransformKind,
    /// Open shop image: `m` scaled columns, followed by `n` diagonal columns
    /// for the augmented transform.
    pub image: PdInstance,
    /// Diagonal lower bounds, augmented transform only.
    pub d: Vec<Q>,
}

fn require_zero_releases(inst: &Instance) -> Result<()> {
    match inst.first_positive_release() {
        Some((job, cluster)) => Err(Error::ReleaseTimesUnsupported { job, cluster }),
        None => Ok(()),
    }
}

/// `x_ji = p_ji / mu_i`.
pub fn tspt(inst: &Instance) -> Result<TransformRecord> {
    require_zero_releases(inst)?;
    let d = derive(inst);
    let x = (0..inst.n())
        .map(|j| (0..inst.m()).map(|i| &d.p[j][i] / &d.mu[i]).collect())
        .collect();
    let weights = inst.jobs.iter().map(|j| j.weight.clone()).collect();
    Ok(TransformRecord {
        source: inst.clone(),
        kind: TransformKind::Tspt,
        image: PdInstance::new(x, weights)?,
        d: Vec::new(),
    })
}

/// The scaled columns plus a diagonal block with
/// `d_jj = max_i max(p_ji / mu_ji, p_ji1 / v_1i)`.
pub fn atspt(inst: &Instance) -> Result<TransformRecord> {
    require_zero_releases(inst)?;
    let base = tspt(inst)?;
    let d = derive(inst);
    let n = inst.n();
    let bounds: Vec<Q> = (0..n).map(|j| d.job_lower_bound(inst, j)).collect();
    let x = base
        .image
        .x
        .into_iter()
        .enumerate()
        .map(|(j, mut row)| {
            row.extend((0..n).map(|k| if k == j { bounds[j].clone() } else { Q::zero() }));
            row
        })
        .collect();
    Ok(TransformRecord {
        source: base.source,
        kind: TransformKind::Atspt,
        image: PdInstance::new(x, base.image.weights)?,
        d: bounds,
    })
}

/// Output of the single-order algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleOrderResult {
    pub sigma: Permutation,
    pub schedule: Schedule,
    pub certificate: RatioCertificate,
}

/// Orders jobs with MUSSQ on the plain transform and list-schedules every
/// cluster in that order.
pub fn cc_tspt(inst: &Instance) -> Result<SingleOrderResult> {
    let record = tspt(inst)?;
    finish(inst, "cctspt", mussq(&record.image))
}

/// Same as [`cc_tspt`] on the augmented transform. The diagonal machines
/// only influence the order.
pub fn cc_atspt(inst: &Instance) -> Result<SingleOrderResult> {
    let record = atspt(inst)?;
    finish(inst, "ccatspt", mussq(&record.image))
}

fn finish(inst: &Instance, name: &str, sigma: Permutation) -> Result<SingleOrderResult> {
    let schedule = list_lpt_single(inst, &sigma)?;
    let certificate = certificate_for(inst, name, &schedule.objective, Some(single_order_guarantee(inst)))?;
    Ok(SingleOrderResult {
        sigma,
        schedule,
        certificate,
    })
}

/// Approximation factor of the single-order algorithms: `2 + 1/rho` on
/// fully parallelizable instances, 3 on identical machines and `2 + R`
/// otherwise.
pub fn single_order_guarantee(inst: &Instance) -> Q {
    let two = Q::from_integer(2.into());
    if let Ok(rho) = time_resolution(inst) {
        return two + Q::one() / Q::from_integer(rho.into());
    }
    let d = derive(inst);
    let identical = d.r_i.iter().all(|r| r.is_one());
    if identical {
        Q::from_integer(3.into())
    } else {
        two + d.r
    }
}

/// True when every machine has unit speed and every task unit length.
pub fn is_fps(inst: &Instance) -> bool {
    let one = Q::one();
    inst.clusters.iter().all(|c| c.speeds.iter().all(|v| *v == one))
        && inst
            .jobs
            .iter()
            .flat_map(|j| &j.subjobs)
            .all(|s| s.tasks.iter().all(|p| *p == one))
}

/// `min ceil(p_ji / m_i)` over nonempty subjobs of a fully parallelizable
/// instance.
pub fn time_resolution(inst: &Instance) -> Result<u64> {
    if !is_fps(inst) {
        return Err(Error::NotFps("speeds and task lengths must all be 1".into()));
    }
    let mut rho: Option<u64> = None;
    for job in &inst.jobs {
        for (i, s) in job.subjobs.iter().enumerate() {
            if s.tasks.is_empty() {
                continue;
            }
            let m = inst.clusters[i].machines() as u64;
            let r = (s.tasks.len() as u64).div_ceil(m);
            rho = Some(rho.map_or(r, |cur| cur.min(r)));
        }
    }
    rho.ok_or_else(|| Error::NotFps("instance has no tasks".into()))
}
