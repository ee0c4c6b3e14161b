//! JSON instance documents.
//!
//! ```json
//! {
//!   "version": "ccsched/1",
//!   "kind": "cc",
//!   "name": "example",
//!   "clusters": [["2", "1"], ["1"]],
//!   "jobs": [
//!     { "weight": "1", "subjobs": [ { "tasks": ["3", "1"], "release": "0" }, { "tasks": [] } ] }
//!   ]
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings holding a decimal (`"2.5"`,
//! `"1e-3"`) or a fraction (`"7/3"`). Emitted documents always use strings:
//! decimals when the value has a finite expansion, `num/den` otherwise, so a
//! document survives a parse/emit cycle unchanged. `kind` defaults to `cc`;
//! lateness documents carry `machines` and jobs of the form
//! `{ "p": .., "d": .., "w": .. }`.

use std::fs;
use std::path::Path;

use ccsched::lateness::LatenessInstance;
use ccsched::model::{validate, Cluster, Instance, Job, Subjob};
use ccsched::rational::{format_q, parse_q};
use ccsched::{Error, Q};
use log::warn;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = "ccsched/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Cc(Instance),
    Lateness { name: String, instance: LatenessInstance },
}

impl Document {
    pub fn name(&self) -> &str {
        match self {
            Document::Cc(inst) => &inst.name,
            Document::Lateness { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Num(Q);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            other => return Err(de::Error::custom(format!("expected a number, found {other}"))),
        };
        parse_q(&text).map(Num).map_err(de::Error::custom)
    }
}

fn nums(v: &[Q]) -> Vec<Num> {
    v.iter().cloned().map(Num).collect()
}

fn qs(v: Vec<Num>) -> Vec<Q> {
    v.into_iter().map(|n| n.0).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CcDoc {
    version: String,
    #[serde(default = "cc_kind")]
    kind: String,
    #[serde(default)]
    name: String,
    clusters: Vec<Vec<Num>>,
    jobs: Vec<JobDoc>,
}

fn cc_kind() -> String {
    "cc".into()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDoc {
    weight: Num,
    subjobs: Vec<SubjobDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubjobDoc {
    tasks: Vec<Num>,
    #[serde(default, skip_serializing_if = "is_zero")]
    release: Num,
}

fn is_zero(n: &Num) -> bool {
    n.0.is_zero()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatenessDoc {
    version: String,
    kind: String,
    #[serde(default)]
    name: String,
    machines: usize,
    jobs: Vec<LatenessJobDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatenessJobDoc {
    p: Num,
    d: Num,
    w: Num,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// Parses a document. Outside strict mode, unsorted speeds or tasks are
/// sorted (with a warning) before validation; in strict mode they are
/// validation errors.
pub fn parse_str(text: &str, strict: bool) -> Result<Document, Error> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    match value.get("version").and_then(Value::as_str) {
        Some(VERSION) => {}
        Some(v) => return Err(Error::Parse(format!("unsupported version {v:?}, expected {VERSION:?}"))),
        None => return Err(Error::Parse("missing version tag".into())),
    }
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or("cc");
    match kind {
        "cc" => {
            let doc: CcDoc = serde_json::from_value(value).map_err(parse_err)?;
            let mut inst = Instance {
                name: doc.name,
                clusters: doc.clusters.into_iter().map(|c| Cluster::new(qs(c))).collect(),
                jobs: doc
                    .jobs
                    .into_iter()
                    .map(|j| {
                        let subjobs = j.subjobs.into_iter().map(|s| Subjob::new(qs(s.tasks), s.release.0)).collect();
                        Job::new(j.weight.0, subjobs)
                    })
                    .collect(),
            };
            if !strict && inst.normalize() {
                warn!("{}: sorted speeds/tasks into non-increasing order", inst.name);
            }
            let violations = validate(&inst);
            if !violations.is_empty() {
                return Err(Error::InvalidInstance(violations));
            }
            Ok(Document::Cc(inst))
        }
        "lateness" => {
            let doc: LatenessDoc = serde_json::from_value(value).map_err(parse_err)?;
            let (mut p, mut d, mut w) = (Vec::new(), Vec::new(), Vec::new());
            for j in doc.jobs {
                p.push(j.p.0);
                d.push(j.d.0);
                w.push(j.w.0);
            }
            let instance = LatenessInstance::new(p, d, w, doc.machines)?;
            Ok(Document::Lateness { name: doc.name, instance })
        }
        other => Err(Error::Parse(format!("unknown kind {other:?}"))),
    }
}

pub fn parse_file(path: &Path, strict: bool) -> Result<Document, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_str(&text, strict)
}

pub fn emit(doc: &Document) -> String {
    let json = match doc {
        Document::Cc(inst) => serde_json::to_string_pretty(&CcDoc {
            version: VERSION.into(),
            kind: cc_kind(),
            name: inst.name.clone(),
            clusters: inst.clusters.iter().map(|c| nums(&c.speeds)).collect(),
            jobs: inst
                .jobs
                .iter()
                .map(|j| JobDoc {
                    weight: Num(j.weight.clone()),
                    subjobs: j
                        .subjobs
                        .iter()
                        .map(|s| SubjobDoc {
                            tasks: nums(&s.tasks),
                            release: Num(s.release.clone()),
                        })
                        .collect(),
                })
                .collect(),
        }),
        Document::Lateness { name, instance } => serde_json::to_string_pretty(&LatenessDoc {
            version: VERSION.into(),
            kind: "lateness".into(),
            name: name.clone(),
            machines: instance.m,
            jobs: (0..instance.n())
                .map(|j| LatenessJobDoc {
                    p: Num(instance.p[j].clone()),
                    d: Num(instance.d[j].clone()),
                    w: Num(instance.w[j].clone()),
                })
                .collect(),
        }),
    };
    json.expect("documents serialize") + "\n"
}
