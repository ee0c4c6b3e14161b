//! Generator families named on the command line, with `key=value`
//! parameters on top of per-family defaults.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::str::FromStr;

use ccsched::cclp::InstanceClass;
use ccsched::gen::{CcParams, Family};
use ccsched::rational::{frac, int, parse_q};
use ccsched::Error;

pub const FAMILIES: [&str; 6] = ["random-cc", "benchmark", "random-pd", "fps", "swag-adversarial", "lateness"];

struct Params(BTreeMap<String, String>);

impl Params {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn num<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, Error> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| bad(key, &v)),
        }
    }

    /// `a-b` or a single value `a`.
    fn range<T: FromStr + Copy>(&mut self, key: &str, default: RangeInclusive<T>) -> Result<RangeInclusive<T>, Error> {
        let Some(v) = self.take(key) else { return Ok(default) };
        let (lo, hi) = v.split_once('-').unwrap_or((&v, &v));
        match (lo.trim().parse(), hi.trim().parse()) {
            (Ok(lo), Ok(hi)) => Ok(lo..=hi),
            _ => Err(bad(key, &v)),
        }
    }

    fn finish(self, family: &str) -> Result<(), Error> {
        match self.0.keys().next() {
            Some(k) => Err(Error::BadParams(format!("unknown parameter '{k}' for family {family}"))),
            None => Ok(()),
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::BadParams(format!("cannot parse {key}={value}"))
}

/// Accepts the tag (`Id,A,B`) or the variant name (`IdAB`).
pub fn parse_class(text: &str) -> Result<InstanceClass, Error> {
    InstanceClass::ALL
        .into_iter()
        .find(|c| c.tag() == text || format!("{c:?}").eq_ignore_ascii_case(text))
        .ok_or_else(|| Error::BadParams(format!("unknown instance class '{text}'")))
}

pub fn parse_family(name: &str, params: &[String]) -> Result<Family, Error> {
    let mut map = BTreeMap::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::BadParams(format!("expected key=value, got '{p}'")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut p = Params(map);
    let family = match name {
        "random-cc" | "benchmark" => {
            let base = if name == "benchmark" { CcParams::benchmark() } else { CcParams::default() };
            let params = CcParams {
                jobs: p.range("jobs", base.jobs)?,
                clusters: p.range("clusters", base.clusters)?,
                machines: p.range("machines", base.machines)?,
                tasks: p.range("tasks", base.tasks)?,
                length: p.range("length", base.length)?,
                weight: p.range("weight", base.weight)?,
                release: p.range("release", base.release)?,
                speed: p.range("speed", base.speed)?,
            };
            let class = p.take("class").map(|c| parse_class(&c)).transpose()?;
            Family::RandomCc { params, class }
        }
        "random-pd" => Family::RandomPd {
            n: p.num("n", 6)?,
            m: p.num("m", 3)?,
            max_p: p.num("max-p", 9)?,
            max_w: p.num("max-w", 5)?,
        },
        "fps" => Family::Fps {
            n: p.num("n", 4)?,
            m: p.num("m", 2)?,
            max_machines: p.num("max-machines", 3)?,
            rho: p.num("rho", 1)?,
        },
        "swag-adversarial" => {
            let rational = |p: &mut Params, key: &str, default| match p.take(key) {
                None => Ok(default),
                Some(v) => parse_q(&v).map_err(|_| bad(key, &v)),
            };
            Family::SwagAdversarial {
                m: p.num("m", 3)?,
                l: p.num("l", 2)?,
                p: rational(&mut p, "p", int(1))?,
                eps: rational(&mut p, "eps", frac(1, 4))?,
            }
        }
        "lateness" => Family::Lateness {
            n: p.num("n", 6)?,
            m: p.num("m", 2)?,
            max_p: p.num("max-p", 9)?,
            max_d: p.num("max-d", 20)?,
            max_w: p.num("max-w", 5)?,
        },
        other => {
            return Err(Error::BadParams(format!(
                "unknown family '{other}' (expected one of {})",
                FAMILIES.join(", ")
            )))
        }
    };
    p.finish(name)?;
    Ok(family)
}
