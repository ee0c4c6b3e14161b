//! CC-LP: solve the relaxation, sort each cluster by a halved-work key and
//! list-schedule.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::listlpt::list_lpt;
use crate::model::{derive, Instance, Permutation, Schedule};
use crate::rational::Q;
use crate::relaxation::{solve_lp1, LpSolution};
use crate::verify::{certificate_with_bound, RatioCertificate};

/// Instance classes of the guarantee table. `Id`: all machines of a cluster
/// have equal speed. `A`: no release times. `B`: all tasks of a subjob have
/// the same length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceClass {
    IdAB,
    IdNotAB,
    IdANotB,
    IdNotANotB,
    NonIdA,
    NonIdNotA,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 6] = [
        InstanceClass::IdAB,
        InstanceClass::IdNotAB,
        InstanceClass::IdANotB,
        InstanceClass::IdNotANotB,
        InstanceClass::NonIdA,
        InstanceClass::NonIdNotA,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            InstanceClass::IdAB => "Id,A,B",
            InstanceClass::IdNotAB => "Id,!A,B",
            InstanceClass::IdANotB => "Id,A,!B",
            InstanceClass::IdNotANotB => "Id,!A,!B",
            InstanceClass::NonIdA => "!Id,A",
            InstanceClass::NonIdNotA => "!Id,!A",
        }
    }

    pub fn identical(self) -> bool {
        !matches!(self, InstanceClass::NonIdA | InstanceClass::NonIdNotA)
    }

    pub fn zero_release(self) -> bool {
        matches!(self, InstanceClass::IdAB | InstanceClass::IdANotB | InstanceClass::NonIdA)
    }

    /// CC-LP guarantee; `r` is the instance's speed-skew constant R.
    pub fn guarantee(self, r: &Q) -> Q {
        let c = |k: i64| Q::from_integer(k.into());
        match self {
            InstanceClass::IdAB => c(2),
            InstanceClass::IdNotAB | InstanceClass::IdANotB => c(3),
            InstanceClass::IdNotANotB => c(4),
            InstanceClass::NonIdA => c(2) + r,
            InstanceClass::NonIdNotA => c(3) + r,
        }
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn classify(inst: &Instance) -> InstanceClass {
    let id = inst
        .clusters
        .iter()
        .all(|c| c.speeds.iter().all(|v| *v == c.speeds[0]));
    let a = inst.has_zero_releases();
    let b = inst
        .jobs
        .iter()
        .flat_map(|j| &j.subjobs)
        .all(|s| s.tasks.iter().all(|p| *p == s.tasks[0]));
    match (id, a, b) {
        (true, true, true) => InstanceClass::IdAB,
        (true, false, true) => InstanceClass::IdNotAB,
        (true, true, false) => InstanceClass::IdANotB,
        (true, false, false) => InstanceClass::IdNotANotB,
        (false, true, _) => InstanceClass::NonIdA,
        (false, false, _) => InstanceClass::NonIdNotA,
    }
}

/// CC-LP guarantee for `inst`.
pub fn guarantee(inst: &Instance) -> Q {
    classify(inst).guarantee(&derive(inst).r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcLpResult {
    pub lp: LpSolution,
    pub sigmas: Vec<Permutation>,
    pub schedule: Schedule,
    pub certificate: RatioCertificate,
}

/// Per-cluster orders from LP completion times: ascending
/// `C_j - p_ji / (2 mu_ji)`, ties by job index, jobs without work on the
/// cluster last.
pub fn lp_orders(inst: &Instance, completion: &[Q]) -> Vec<Permutation> {
    let d = derive(inst);
    let half = Q::one() / Q::from_integer(2.into());
    (0..inst.m())
        .map(|i| {
            let mut keyed: Vec<(Q, usize)> = Vec::new();
            let mut idle = Vec::new();
            for j in 0..inst.n() {
                if d.p[j][i].is_zero() {
                    idle.push(j);
                } else {
                    keyed.push((&completion[j] - &d.p[j][i] / &d.mu_ji[j][i] * &half, j));
                }
            }
            keyed.sort();
            let order = keyed.into_iter().map(|(_, j)| j).chain(idle).collect();
            Permutation::new(order).expect("every job appears once")
        })
        .collect()
}

pub fn cc_lp(inst: &Instance) -> Result<CcLpResult> {
    let lp = solve_lp1(inst)?;
    let sigmas = lp_orders(inst, &lp.completion);
    let schedule = list_lpt(inst, &sigmas)?;
    let certificate = certificate_with_bound(
        inst,
        "cclp",
        &schedule.objective,
        &lp.objective,
        Some(guarantee(inst)),
    );
    Ok(CcLpResult {
        lp,
        sigmas,
        schedule,
        certificate,
    })
}
