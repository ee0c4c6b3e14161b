//! Benchmark runs: every algorithm plus a certificate per instance.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use ccsched::cclp::classify;
use ccsched::gen::{generate, Generated};
use ccsched::lateness::reduce_lateness;
use ccsched::rational::to_f64;
use ccsched::verify::{certificate_with_bound, guarantee_for, lower_bound_from_lp, run, RATIO_TOL};
use ccsched::{solve_lp1, Algorithm, BoundSource, Error, Instance, Q};
use log::info;
use rayon::prelude::*;

use crate::format::{parse_file, Document};
use crate::report::sig12;

#[derive(Debug, Clone)]
pub struct AlgorithmResult {
    pub algorithm: Algorithm,
    /// `None` when the algorithm does not accept the instance (release times).
    pub objective: Option<Q>,
    pub ratio: Option<Q>,
    pub pass: Option<bool>,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub instance: String,
    pub class: String,
    pub n: usize,
    pub m: usize,
    pub lp1: Q,
    pub lp1_seconds: f64,
    pub lower_bound: Q,
    pub bound_source: BoundSource,
    pub results: Vec<AlgorithmResult>,
}

impl BenchRecord {
    pub fn result(&self, alg: Algorithm) -> &AlgorithmResult {
        self.results.iter().find(|r| r.algorithm == alg).expect("every algorithm is recorded")
    }

    /// Certificates that failed, and ratios below one (which would mean the
    /// lower bound or a schedule is wrong).
    pub fn problems(&self) -> Vec<String> {
        let floor = 1.0 - RATIO_TOL;
        let mut out = Vec::new();
        for r in &self.results {
            if r.pass == Some(false) {
                out.push(format!("{}: {} exceeds its guarantee", self.instance, r.algorithm));
            }
            if let Some(ratio) = &r.ratio {
                if to_f64(ratio) < floor {
                    out.push(format!("{}: {} ratio {} below 1", self.instance, r.algorithm, to_f64(ratio)));
                }
            }
        }
        out
    }
}

pub fn bench_instance(inst: &Instance) -> Result<BenchRecord, Error> {
    let t = Instant::now();
    let lp = solve_lp1(inst)?;
    let lp1_seconds = t.elapsed().as_secs_f64();
    let (bound, source) = lower_bound_from_lp(inst, &lp.objective)?;
    let mut results = Vec::new();
    for alg in Algorithm::ALL {
        let t = Instant::now();
        let outcome = match run(inst, alg) {
            Ok(s) => Some(s),
            Err(Error::ReleaseTimesUnsupported { .. }) if !alg.supports_releases() => None,
            Err(e) => return Err(e),
        };
        let seconds = t.elapsed().as_secs_f64();
        let (objective, ratio, pass) = match outcome {
            Some(s) => {
                let cert = certificate_with_bound(inst, alg.name(), &s.objective, &bound, guarantee_for(inst, alg));
                (Some(s.objective), Some(cert.observed), cert.guaranteed.map(|_| cert.pass))
            }
            None => (None, None, None),
        };
        results.push(AlgorithmResult {
            algorithm: alg,
            objective,
            ratio,
            pass,
            seconds,
        });
    }
    info!("{}: done", inst.name);
    Ok(BenchRecord {
        instance: inst.name.clone(),
        class: classify(inst).tag().to_string(),
        n: inst.n(),
        m: inst.m(),
        lp1: lp.objective,
        lp1_seconds,
        lower_bound: bound,
        bound_source: source,
        results,
    })
}

/// Runs the suite on `threads` workers (0: rayon's default); records come
/// back in suite order.
pub fn bench_suite(instances: &[Instance], threads: usize) -> Result<Vec<BenchRecord>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| instances.par_iter().map(bench_instance).collect())
}

/// A suite is either a directory of instance files (lateness files are
/// reduced) or `FAMILY:COUNT:SEED`, which generates COUNT instances with
/// seeds SEED, SEED+1, ...
pub fn load_suite(spec: &str, family_params: &[String], strict: bool) -> Result<Vec<Instance>, Error> {
    let path = Path::new(spec);
    if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(|e| Error::Parse(format!("{spec}: {e}")))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        return files
            .iter()
            .map(|f| match parse_file(f, strict)? {
                Document::Cc(inst) => Ok(inst),
                Document::Lateness { name, instance } => {
                    let mut inst = reduce_lateness(&instance)?;
                    inst.name = name;
                    Ok(inst)
                }
            })
            .collect();
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let [family, count, seed] = parts[..] else {
        return Err(Error::BadParams(format!("'{spec}' is neither a directory nor FAMILY:COUNT:SEED")));
    };
    let count: u64 = count.parse().map_err(|_| Error::BadParams(format!("bad count '{count}'")))?;
    let seed: u64 = seed.parse().map_err(|_| Error::BadParams(format!("bad seed '{seed}'")))?;
    let family = crate::family::parse_family(family, family_params)?;
    (0..count)
        .map(|k| {
            let mut inst = match generate(&family, seed + k)? {
                Generated::Cc(inst) => inst,
                Generated::Lateness(li) => reduce_lateness(&li)?,
            };
            inst.name = format!("{}-{}", parts[0], seed + k);
            Ok(inst)
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["instance", "class", "n", "m", "lp1", "lp1_seconds", "lower_bound", "bound_source"]
        .map(String::from)
        .to_vec();
    for alg in Algorithm::ALL {
        for col in ["objective", "ratio", "pass", "seconds"] {
            header.push(format!("{alg}_{col}"));
        }
    }
    w.write_record(&header)?;
    let num = |q: &Option<Q>| q.as_ref().map_or(String::new(), |q| sig12(to_f64(q)));
    for r in records {
        let mut row = vec![
            r.instance.clone(),
            r.class.clone(),
            r.n.to_string(),
            r.m.to_string(),
            sig12(to_f64(&r.lp1)),
            sig12(r.lp1_seconds),
            sig12(to_f64(&r.lower_bound)),
            match r.bound_source {
                BoundSource::Lp1 => "lp1".into(),
                BoundSource::PdOptimum => "pd-optimum".into(),
            },
        ];
        for res in &r.results {
            row.push(num(&res.objective));
            row.push(num(&res.ratio));
            row.push(res.pass.map_or(String::new(), |p| if p { "pass".into() } else { "fail".into() }));
            row.push(sig12(res.seconds));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Mean ratio and certificate tally per algorithm.
pub fn summary(records: &[BenchRecord]) -> String {
    let mut lines = Vec::new();
    for alg in Algorithm::ALL {
        let ratios: Vec<f64> = records.iter().filter_map(|r| r.result(alg).ratio.as_ref()).map(to_f64).collect();
        if ratios.is_empty() {
            lines.push(format!("{:>8}: not applicable", alg.name()));
            continue;
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let worst = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let failed = records.iter().filter(|r| r.result(alg).pass == Some(false)).count();
        lines.push(format!(
            "{:>8}: {} instances, mean ratio {mean:.4}, worst {worst:.4}, {failed} certificate failures",
            alg.name(),
            ratios.len()
        ));
    }
    lines.join("\n")
}
