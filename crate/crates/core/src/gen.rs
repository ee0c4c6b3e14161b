//! Seeded instance generators.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cclp::InstanceClass;
use crate::error::{Error, Result};
use crate::lateness::LatenessInstance;
use crate::model::{Cluster, Instance, Job, Normalization, Subjob};
use crate::openshop::PdInstance;
use crate::rational::Q;
use crate::swag::gen_adversarial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn q(v: u64) -> Q {
    Q::from_integer(v.into())
}

/// Integer ranges for [`random_cc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcParams {
    pub jobs: RangeInclusive<usize>,
    pub clusters: RangeInclusive<usize>,
    pub machines: RangeInclusive<usize>,
    /// Tasks per subjob; 0 allowed (empty subjob).
    pub tasks: RangeInclusive<usize>,
    pub length: RangeInclusive<u64>,
    pub weight: RangeInclusive<u64>,
    pub release: RangeInclusive<u64>,
    pub speed: RangeInclusive<u64>,
}

impl Default for CcParams {
    fn default() -> Self {
        Self {
            jobs: 1..=8,
            clusters: 1..=3,
            machines: 1..=3,
            tasks: 0..=4,
            length: 1..=9,
            weight: 1..=5,
            release: 0..=6,
            speed: 1..=4,
        }
    }
}

impl CcParams {
    /// Medium-size instances without release times, used by the benchmark
    /// suite: 10 to 20 jobs over 2 to 4 clusters of up to 5 machines.
    pub fn benchmark() -> Self {
        Self {
            jobs: 10..=20,
            clusters: 2..=4,
            machines: 1..=5,
            release: 0..=0,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        let bad = self.jobs.is_empty()
            || self.clusters.is_empty()
            || self.machines.is_empty()
            || self.tasks.is_empty()
            || self.length.is_empty()
            || self.weight.is_empty()
            || self.release.is_empty()
            || self.speed.is_empty()
            || *self.jobs.start() == 0
            || *self.clusters.start() == 0
            || *self.machines.start() == 0
            || *self.length.start() == 0
            || *self.weight.start() == 0
            || *self.speed.start() == 0;
        if bad {
            return Err(Error::BadParams(format!("empty or non-positive range in {self:?}")));
        }
        Ok(())
    }
}

/// Random cluster instance. With a target class the draw is shaped so that
/// [`crate::cclp::classify`] returns exactly that class; this may widen the
/// configured ranges (a second machine, a second task, a positive release).
pub fn random_cc<R: Rng>(params: &CcParams, target: Option<InstanceClass>, rng: &mut R) -> Result<Instance> {
    params.check()?;
    let n = rng.gen_range(params.jobs.clone());
    let m = rng.gen_range(params.clusters.clone());
    let (identical, zero_release, constant_tasks) = match target {
        None => (rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_bool(0.3)),
        Some(c) => (
            c.identical(),
            c.zero_release(),
            matches!(c, InstanceClass::IdAB | InstanceClass::IdNotAB),
        ),
    };

    let mut clusters = Vec::with_capacity(m);
    for i in 0..m {
        let mut k = rng.gen_range(params.machines.clone());
        let speeds: Vec<u64> = if identical {
            vec![rng.gen_range(params.speed.clone()); k]
        } else {
            if i == 0 && k == 1 && target.is_some() {
                k = 2;
            }
            let mut s: Vec<u64> = (0..k).map(|_| rng.gen_range(params.speed.clone())).collect();
            if i == 0 && target.is_some() && s.iter().all(|v| *v == s[0]) {
                s[0] += 1;
            }
            s
        };
        clusters.push(Cluster::new(speeds.into_iter().map(q).collect()));
    }

    let mut jobs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut subjobs: Vec<Subjob> = (0..m)
            .map(|_| {
                let k = rng.gen_range(params.tasks.clone());
                let tasks: Vec<Q> = if constant_tasks {
                    vec![q(rng.gen_range(params.length.clone())); k]
                } else {
                    (0..k).map(|_| q(rng.gen_range(params.length.clone()))).collect()
                };
                let release = if zero_release || k == 0 {
                    Q::from_integer(0.into())
                } else {
                    q(rng.gen_range(params.release.clone()))
                };
                Subjob::new(tasks, release)
            })
            .collect();
        if subjobs.iter().all(Subjob::is_empty) {
            let i = rng.gen_range(0..m);
            subjobs[i] = Subjob::new(vec![q(rng.gen_range(params.length.clone()))], Q::from_integer(0.into()));
        }
        jobs.push(Job::new(q(rng.gen_range(params.weight.clone())), subjobs));
    }

    if let Some(c) = target {
        let sub = jobs[0].subjobs.iter_mut().find(|s| !s.is_empty()).expect("job 0 has work");
        if !c.zero_release() && sub.release == Q::from_integer(0.into()) {
            sub.release = q((*params.release.end()).max(1));
        }
        if matches!(c, InstanceClass::IdANotB | InstanceClass::IdNotANotB)
            && sub.tasks.iter().all(|p| *p == sub.tasks[0])
        {
            let p = sub.tasks[0].clone();
            sub.tasks = vec![&p + Q::from_integer(1.into()), p];
        }
    }

    let mut inst = Instance {
        name: String::new(),
        clusters,
        jobs,
    };
    inst.normalize();
    inst.name = format!("random-cc-n{n}-m{m}");
    Instance::build(inst.name, inst.clusters, inst.jobs, Normalization::Strict)
}

/// Concurrent open shop instance with entries in `0..=max_p` (some zero) and
/// weights in `1..=max_w`.
pub fn random_pd<R: Rng>(n: usize, m: usize, max_p: u64, max_w: u64, rng: &mut R) -> Result<PdInstance> {
    if n == 0 || m == 0 || max_p == 0 || max_w == 0 {
        return Err(Error::BadParams("random-pd needs n, m, max_p, max_w >= 1".into()));
    }
    let x = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| if rng.gen_bool(0.2) { q(0) } else { q(rng.gen_range(1..=max_p)) })
                .collect()
        })
        .collect();
    let w = (0..n).map(|_| q(rng.gen_range(1..=max_w))).collect();
    PdInstance::new(x, w)
}

/// Fully parallelizable instance (unit speeds, unit tasks, no releases)
/// whose time resolution is exactly `rho`.
pub fn fps<R: Rng>(n: usize, m: usize, max_machines: usize, rho: u64, rng: &mut R) -> Result<Instance> {
    if n == 0 || m == 0 || max_machines == 0 || rho == 0 {
        return Err(Error::BadParams("fps needs n, m, max_machines, rho >= 1".into()));
    }
    let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=max_machines)).collect();
    let rho = rho as usize;
    let draw = |rng: &mut R, k: usize| rng.gen_range((rho - 1) * k + 1..=(rho + 1) * k);
    let mut jobs: Vec<Job> = (0..n)
        .map(|_| {
            let keep = rng.gen_range(0..m);
            let subjobs = (0..m)
                .map(|i| {
                    if i != keep && rng.gen_bool(0.25) {
                        Subjob::empty()
                    } else {
                        Subjob::new(vec![q(1); draw(rng, sizes[i])], q(0))
                    }
                })
                .collect();
            Job::new(q(rng.gen_range(1..=5)), subjobs)
        })
        .collect();
    // pin the minimum
    let i = rng.gen_range(0..m);
    jobs[0].subjobs[i] = Subjob::new(vec![q(1); rho * sizes[i]], q(0));
    Instance::build(
        format!("fps-n{n}-m{m}-rho{rho}"),
        sizes.iter().map(|&k| Cluster::new(vec![q(1); k])).collect(),
        jobs,
        Normalization::Strict,
    )
}

pub fn lateness<R: Rng>(n: usize, m: usize, max_p: u64, max_d: u64, max_w: u64, rng: &mut R) -> Result<LatenessInstance> {
    if n == 0 || m == 0 || max_p == 0 || max_w == 0 {
        return Err(Error::BadParams("lateness needs n, m, max_p, max_w >= 1".into()));
    }
    LatenessInstance::new(
        (0..n).map(|_| q(rng.gen_range(1..=max_p))).collect(),
        (0..n).map(|_| q(rng.gen_range(0..=max_d))).collect(),
        (0..n).map(|_| q(rng.gen_range(1..=max_w))).collect(),
        m,
    )
}

fn gap_subjob<R: Rng>(rng: &mut R) -> Subjob {
    let k = rng.gen_range(0..=2);
    Subjob::new((0..k).map(|_| q(rng.gen_range(1..=2))).collect(), q(0))
}

/// Small unit-speed, unit-weight instance for the single-order gap search:
/// 2 to 5 jobs, two clusters of 1 to 3 machines, up to 2 tasks of length 1
/// or 2 per subjob. Gaps need tasks of different lengths competing on
/// multi-machine clusters; wider ranges make them rarer, not larger.
pub fn gap_candidate<R: Rng>(rng: &mut R) -> Instance {
    let n = rng.gen_range(2..=5);
    let clusters = (0..2).map(|_| Cluster::new(vec![q(1); rng.gen_range(1..=3)])).collect();
    let jobs = (0..n)
        .map(|_| {
            let mut subjobs = vec![gap_subjob(rng), gap_subjob(rng)];
            if subjobs.iter().all(Subjob::is_empty) {
                subjobs[0] = Subjob::new(vec![q(1)], q(0));
            }
            Job::new(q(1), subjobs)
        })
        .collect();
    finish_gap(Instance {
        name: "gap".into(),
        clusters,
        jobs,
    })
}

/// Redraws one subjob or one cluster size of a gap candidate.
pub fn mutate_gap_candidate<R: Rng>(inst: &Instance, rng: &mut R) -> Instance {
    let mut next = inst.clone();
    if rng.gen_bool(0.15) {
        let c = next.clusters.choose_mut(rng).expect("two clusters");
        c.speeds = vec![q(1); rng.gen_range(1..=3)];
    } else {
        let j = rng.gen_range(0..next.n());
        let i = rng.gen_range(0..next.m());
        next.jobs[j].subjobs[i] = gap_subjob(rng);
        if next.jobs[j].subjobs.iter().all(Subjob::is_empty) {
            next.jobs[j].subjobs[i] = Subjob::new(vec![q(1)], q(0));
        }
    }
    finish_gap(next)
}

fn finish_gap(mut inst: Instance) -> Instance {
    inst.normalize();
    inst
}

/// A generator family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    RandomCc { params: CcParams, class: Option<InstanceClass> },
    RandomPd { n: usize, m: usize, max_p: u64, max_w: u64 },
    Fps { n: usize, m: usize, max_machines: usize, rho: u64 },
    SwagAdversarial { m: usize, l: usize, p: Q, eps: Q },
    Lateness { n: usize, m: usize, max_p: u64, max_d: u64, max_w: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Cc(Instance),
    Lateness(LatenessInstance),
}

/// Deterministic in `(family, seed)`.
pub fn generate(family: &Family, seed: u64) -> Result<Generated> {
    let mut r = rng(seed);
    Ok(match family {
        Family::RandomCc { params, class } => Generated::Cc(random_cc(params, *class, &mut r)?),
        Family::RandomPd { n, m, max_p, max_w } => {
            Generated::Cc(random_pd(*n, *m, *max_p, *max_w, &mut r)?.to_instance(&format!("random-pd-n{n}-m{m}")))
        }
        Family::Fps { n, m, max_machines, rho } => Generated::Cc(fps(*n, *m, *max_machines, *rho, &mut r)?),
        Family::SwagAdversarial { m, l, p, eps } => Generated::Cc(gen_adversarial(*m, *l, p, eps)?),
        Family::Lateness { n, m, max_p, max_d, max_w } => {
            Generated::Lateness(lateness(*n, *m, *max_p, *max_d, *max_w, &mut r)?)
        }
    })
}
