//! The LP relaxation over job completion times.
//!
//! Variables are the job completion times `C_j`; the objective is
//! `sum_j w_j C_j`. Three constraint families apply:
//!
//! * **set cuts**, for every cluster `i` and job subset `S`:
//!   `sum_{j in S} p_ji C_j >= ((sum_S p_ji)^2 / mu_i + sum_S p_ji^2 / mu_ji) / 2`
//! * **dominant task**: `C_j >= p_ji1 / v_1i + r_ji`
//! * **aggregate**: `C_j >= p_ji / mu_ji + r_ji`
//!
//! The set cuts are exponentially many and are generated on demand by a
//! separation routine that only has to scan `n` prefix sets per cluster.
//! The two per-subjob bounds are folded into a shift `C_j = lb_j + y_j`,
//! after which the LP over `y` is a covering problem whose dual is a packing
//! LP solved by [`PackingLp`](crate::simplex::PackingLp).

use std::io::{self, Write};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{derive, DerivedConstants, Instance};
use crate::rational::{format_q, from_f64, to_f64, Scalar, Q};
use crate::simplex::PackingLp;

/// A set cut for one cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub cluster: usize,
    /// Job indices, ascending.
    pub subset: Vec<usize>,
    pub rhs: Q,
}

impl Cut {
    pub fn new(d: &DerivedConstants, cluster: usize, mut subset: Vec<usize>) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        subset.sort_unstable();
        subset.dedup();
        let rhs = cut_rhs(d, cluster, &subset);
        Ok(Self {
            cluster,
            subset,
            rhs,
        })
    }

    pub fn lhs(&self, d: &DerivedConstants, completion: &[Q]) -> Q {
        self.subset
            .iter()
            .fold(Q::zero(), |acc, &j| acc + &d.p[j][self.cluster] * &completion[j])
    }

    /// `rhs - lhs`; positive means violated.
    pub fn violation(&self, d: &DerivedConstants, completion: &[Q]) -> Q {
        &self.rhs - self.lhs(d, completion)
    }
}

/// Right-hand side of the set cut for `(cluster, subset)`.
pub fn cut_rhs(d: &DerivedConstants, cluster: usize, subset: &[usize]) -> Q {
    let mut total = Q::zero();
    let mut squares = Q::zero();
    for &j in subset {
        let p = &d.p[j][cluster];
        if p.is_zero() {
            continue;
        }
        total += p;
        squares += p * p / &d.mu_ji[j][cluster];
    }
    (&total * &total / &d.mu[cluster] + squares) / Q::from_integer(2.into())
}

/// Violation of the set cut `(cluster, subset)` at `completion`.
pub fn violation(inst: &Instance, cluster: usize, subset: &[usize], completion: &[Q]) -> Result<Q> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if completion.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            found: completion.len(),
        });
    }
    if let Some(&bad) = subset.iter().find(|&&j| j >= inst.n()) {
        return Err(Error::InvalidArgument(format!("no job {bad}")));
    }
    let d = derive(inst);
    Ok(Cut::new(&d, cluster, subset.to_vec())?.violation(&d, completion))
}

/// Most violated prefix of cluster `cluster` under the order of
/// `C_j - p_ji / (2 mu_ji)` (ties by job index). Jobs without work on the
/// cluster are skipped. `None` when the cluster has no work at all.
pub fn most_violated_prefix(
    d: &DerivedConstants,
    cluster: usize,
    completion: &[Q],
) -> Option<(Vec<usize>, Q)> {
    let two = Q::from_integer(2.into());
    let mut keyed: Vec<(Q, usize)> = (0..completion.len())
        .filter(|&j| !d.p[j][cluster].is_zero())
        .map(|j| {
            let key = &completion[j] - &d.p[j][cluster] / (&two * &d.mu_ji[j][cluster]);
            (key, j)
        })
        .collect();
    keyed.sort();

    let mu = &d.mu[cluster];
    let mut total = Q::zero();
    let mut squares = Q::zero();
    let mut lhs = Q::zero();
    let mut best: Option<(usize, Q)> = None;
    for (k, (_, j)) in keyed.iter().enumerate() {
        let p = &d.p[*j][cluster];
        total += p;
        squares += p * p / &d.mu_ji[*j][cluster];
        lhs += p * &completion[*j];
        let v = (&total * &total / mu + &squares) / &two - &lhs;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((k, v));
        }
    }
    best.map(|(k, v)| {
        let mut subset: Vec<usize> = keyed[..=k].iter().map(|(_, j)| *j).collect();
        subset.sort_unstable();
        (subset, v)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `C_j >= p_ji1 / v_1i + r_ji`
    DominantTask,
    /// `C_j >= p_ji / mu_ji + r_ji`
    Aggregate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundViolation {
    pub job: usize,
    pub cluster: usize,
    pub kind: BoundKind,
    pub amount: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatedCut {
    pub cut: Cut,
    pub violation: Q,
}

/// Output of the separation oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Separation {
    /// At most one cut per cluster, the most violated one.
    pub cuts: Vec<ViolatedCut>,
    /// The most violated per-subjob bound, if any.
    pub bound: Option<BoundViolation>,
}

impl Separation {
    pub fn is_feasible(&self) -> bool {
        self.cuts.is_empty() && self.bound.is_none()
    }

    /// Largest violation over everything reported.
    pub fn max_violation(&self) -> Option<Q> {
        self.cuts
            .iter()
            .map(|c| c.violation.clone())
            .chain(self.bound.iter().map(|b| b.amount.clone()))
            .max()
    }
}

/// Exact separation: anything violated by more than zero is reported.
pub fn separate(inst: &Instance, completion: &[Q]) -> Separation {
    separate_with(inst, &derive(inst), completion, &Q::zero())
}

/// Separation with an absolute violation tolerance.
pub fn separate_with(inst: &Instance, d: &DerivedConstants, completion: &[Q], tol: &Q) -> Separation {
    let mut out = Separation::default();
    for i in 0..inst.m() {
        if let Some((subset, v)) = most_violated_prefix(d, i, completion) {
            if v > *tol {
                let cut = Cut::new(d, i, subset).expect("prefix is nonempty");
                out.cuts.push(ViolatedCut { cut, violation: v });
            }
        }
    }
    for (j, c) in completion.iter().enumerate() {
        for i in 0..inst.m() {
            if d.q[j][i] == 0 {
                continue;
            }
            let r = &inst.jobs[j].subjobs[i].release;
            let candidates = [
                (BoundKind::DominantTask, &d.p_first[j][i] / &d.v1[i] + r - c),
                (BoundKind::Aggregate, &d.p[j][i] / &d.mu_ji[j][i] + r - c),
            ];
            for (kind, amount) in candidates {
                let worse = out.bound.as_ref().is_none_or(|b| amount > b.amount);
                if amount > *tol && worse {
                    out.bound = Some(BoundViolation {
                        job: j,
                        cluster: i,
                        kind,
                        amount,
                    });
                }
            }
        }
    }
    out
}

/// Arithmetic used by the LP subsolver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpMode {
    /// Exact rationals; separation tolerance zero.
    #[default]
    Exact,
    /// `f64` simplex; cuts are added when violated by more than [`FLOAT_FEAS_TOL`].
    Float,
}

/// Absolute violation tolerance of the float mode.
pub const FLOAT_FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpOptions {
    pub mode: LpMode,
    /// Impose the dominant-task and aggregate bounds; without them only set
    /// cuts constrain the solution.
    pub include_bounds: bool,
    /// Maximum number of generated cuts; defaults to `50 n m`.
    pub max_cuts: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            mode: LpMode::Exact,
            include_bounds: true,
            max_cuts: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub completion: Vec<Q>,
    pub objective: Q,
    /// Every set cut generated, in order.
    pub cuts: Vec<Cut>,
    /// Objective after each subsolver call.
    pub history: Vec<Q>,
    pub pivots: usize,
}

/// Solves the relaxation exactly by cut generation.
pub fn solve_lp1(inst: &Instance) -> Result<LpSolution> {
    solve_lp1_with(inst, LpOptions::default())
}

pub fn solve_lp1_with(inst: &Instance, opts: LpOptions) -> Result<LpSolution> {
    match opts.mode {
        LpMode::Exact => cutting_planes::<Q>(inst, opts, Q::zero()),
        LpMode::Float => cutting_planes::<f64>(inst, opts, from_f64(FLOAT_FEAS_TOL).unwrap()),
    }
}

fn cutting_planes<T: Scalar>(inst: &Instance, opts: LpOptions, tol: Q) -> Result<LpSolution> {
    let d = derive(inst);
    let n = inst.n();
    let lower: Vec<Q> = (0..n)
        .map(|j| {
            if opts.include_bounds {
                d.job_lower_bound(inst, j)
            } else {
                Q::zero()
            }
        })
        .collect();
    let limit = opts.max_cuts.unwrap_or(50 * n.max(1) * inst.m().max(1));
    let mut lp = PackingLp::new(inst.jobs.iter().map(|j| T::from_q(&j.weight)).collect());
    let mut cuts: Vec<Cut> = Vec::new();
    let mut history = Vec::new();
    loop {
        lp.optimize(10_000 + 100 * lp.cols())?;
        let completion: Vec<Q> = lp
            .duals()
            .iter()
            .zip(&lower)
            .map(|(y, lb)| {
                let y = y.to_q();
                // float duals may come back as tiny negatives
                if y.is_negative() {
                    lb.clone()
                } else {
                    lb + y
                }
            })
            .collect();
        let objective = inst
            .jobs
            .iter()
            .zip(&completion)
            .fold(Q::zero(), |acc, (job, c)| acc + &job.weight * c);
        history.push(objective.clone());
        let found: Vec<Cut> = (0..inst.m())
            .filter_map(|i| match most_violated_prefix(&d, i, &completion) {
                Some((subset, v)) if v > tol => Some(Cut::new(&d, i, subset).expect("nonempty")),
                _ => None,
            })
            .collect();
        let solution = |cuts: Vec<Cut>, history: Vec<Q>| LpSolution {
            completion: completion.clone(),
            objective: objective.clone(),
            cuts,
            history,
            pivots: lp.pivots(),
        };
        if found.is_empty() {
            return Ok(solution(cuts, history));
        }
        if cuts.len() + found.len() > limit {
            return Err(Error::IterationLimit {
                limit,
                best: Box::new(solution(cuts, history)),
            });
        }
        for cut in found {
            let mut coeffs = vec![T::zero(); n];
            let mut shifted = cut.rhs.clone();
            for &j in &cut.subset {
                let p = &d.p[j][cut.cluster];
                coeffs[j] = T::from_q(p);
                shifted -= p * &lower[j];
            }
            lp.add_column(&coeffs, T::from_q(&shifted));
            cuts.push(cut);
        }
    }
}

/// Checks `completion` against the per-subjob bounds and the given cuts.
/// Returns the first violated constraint as text.
pub fn check_feasible(inst: &Instance, cuts: &[Cut], completion: &[Q]) -> std::result::Result<(), String> {
    let d = derive(inst);
    for cut in cuts {
        let v = cut.violation(&d, completion);
        if v.is_positive() {
            return Err(format!(
                "cut on cluster {} over {:?} violated by {}",
                cut.cluster,
                cut.subset,
                format_q(&v)
            ));
        }
    }
    let sep = separate_with(inst, &d, completion, &Q::zero());
    if let Some(b) = sep.bound {
        return Err(format!(
            "{:?} bound of job {} on cluster {} violated by {}",
            b.kind,
            b.job,
            b.cluster,
            format_q(&b.amount)
        ));
    }
    Ok(())
}

/// Both sides of the sum-of-squares inequality
/// `sum a_i^2 / b_i >= (sum a_i)^2 / (b_1 + ... + b_k)`, where `k` counts
/// the positive `a_i` and `b` is positive and non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaresBound {
    pub lhs: Q,
    pub rhs: Q,
}

impl SquaresBound {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

pub fn check_squares_bound(a: &[Q], b: &[Q]) -> Result<SquaresBound> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidArgument("a must be nonnegative".into()));
    }
    if b.iter().any(|x| !x.is_positive()) || b.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("b must be positive and non-increasing".into()));
    }
    let k = a.iter().filter(|x| x.is_positive()).count();
    let lhs = a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * x / y);
    let rhs = if k == 0 {
        Q::zero()
    } else {
        let total: Q = a.iter().sum();
        let cap: Q = b[..k].iter().sum();
        &total * &total / cap
    };
    Ok(SquaresBound { lhs, rhs })
}

fn lp_number(q: &Q) -> String {
    let s = format_q(q);
    if s.contains('/') {
        format!("{:.17e}", to_f64(q))
    } else {
        s
    }
}

/// Writes the relaxation restricted to `cuts` in CPLEX LP text format.
pub fn write_lp_format<W: Write + ?Sized>(inst: &Instance, cuts: &[Cut], out: &mut W) -> io::Result<()> {
    let d = derive(inst);
    writeln!(out, "\\ completion-time relaxation for {}", inst.name)?;
    writeln!(out, "Minimize")?;
    let terms: Vec<String> = inst
        .jobs
        .iter()
        .enumerate()
        .map(|(j, job)| format!("{} C{j}", lp_number(&job.weight)))
        .collect();
    writeln!(out, " obj: {}", if terms.is_empty() { "0 C0".into() } else { terms.join(" + ") })?;
    writeln!(out, "Subject To")?;
    for (k, cut) in cuts.iter().enumerate() {
        let lhs: Vec<String> = cut
            .subset
            .iter()
            .filter(|&&j| !d.p[j][cut.cluster].is_zero())
            .map(|&j| format!("{} C{j}", lp_number(&d.p[j][cut.cluster])))
            .collect();
        if lhs.is_empty() {
            continue;
        }
        writeln!(out, " cut{k}_c{}: {} >= {}", cut.cluster, lhs.join(" + "), lp_number(&cut.rhs))?;
    }
    for j in 0..inst.n() {
        for i in 0..inst.m() {
            if d.q[j][i] == 0 {
                continue;
            }
            let r = &inst.jobs[j].subjobs[i].release;
            writeln!(
                out,
                " dom_j{j}_c{i}: C{j} >= {}",
                lp_number(&(&d.p_first[j][i] / &d.v1[i] + r))
            )?;
            writeln!(
                out,
                " agg_j{j}_c{i}: C{j} >= {}",
                lp_number(&(&d.p[j][i] / &d.mu_ji[j][i] + r))
            )?;
        }
    }
    writeln!(out, "Bounds")?;
    for j in 0..inst.n() {
        writeln!(out, " C{j} >= 0")?;
    }
    writeln!(out, "End")
}
