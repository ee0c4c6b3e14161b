//! Scheduling jobs whose work is split across several clusters of uniform
//! parallel machines, minimising total weighted completion time.
//!
//! The crate provides two approximation algorithms together with the
//! machinery they are built from and the oracles used to check them:
//!
//! * [`cclp`]: solve the completion-time LP relaxation, order each cluster
//!   by the LP solution and list-schedule.
//! * [`transforms`]: collapse every cluster to a single machine, order jobs
//!   with the primal-dual concurrent-open-shop algorithm in [`openshop`] and
//!   list-schedule the original instance with that single order.
//! * [`swag`]: a greedy baseline and the instance family that defeats it.
//! * [`lateness`]: total weighted lateness on identical machines expressed
//!   as a cluster scheduling instance.
//! * [`verify`]: exhaustive search over list schedules and ratio certificates.
//!
//! All model quantities are exact rationals ([`Q`]).

pub mod cclp;
pub mod error;
pub mod gen;
pub mod lateness;
pub mod listlpt;
pub mod model;
pub mod openshop;
pub mod rational;
pub mod relaxation;
pub mod simplex;
pub mod swag;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    derive, evaluate, validate, Assignment, Cluster, DerivedConstants, Instance, Job, Normalization,
    Permutation, Schedule, Subjob, Violation,
};
pub use rational::Q;
pub use relaxation::{solve_lp1, LpSolution};
pub use verify::{certify, Algorithm, BoundSource, RatioCertificate};

