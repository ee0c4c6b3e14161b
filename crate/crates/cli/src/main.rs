use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccsched::gen::{generate, Generated};
use ccsched::lateness::reduce_lateness;
use ccsched::rational::{format_q, to_f64};
use ccsched::relaxation::{solve_lp1_with, write_lp_format, LpMode, LpOptions};
use ccsched::verify::{certificate_with_bound, guarantee_for, lower_bound, run};
use ccsched::{Algorithm, BoundSource, Error, Instance, RatioCertificate};
use ccsched_cli::bench::{bench_suite, load_suite, summary, write_csv};
use ccsched_cli::family::parse_family;
use ccsched_cli::format::{emit, parse_file, Document};
use ccsched_cli::report::write_schedule;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ccsched", version, about = "Scheduling on concurrent clusters of uniform machines")]
struct Cli {
    /// Reject unsorted speeds/tasks instead of sorting them.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and print its objective and ratio.
    Solve {
        #[arg(long, value_parser = parse_alg)]
        alg: Algorithm,
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the schedule as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the LP relaxation and print its value and cut count.
    Lp {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the final LP in CPLEX LP format.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Use the floating-point subsolver.
        #[arg(long)]
        float: bool,
    },
    /// Generate an instance: `gen FAMILY [key=value ...] --seed S`.
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every algorithm with certificates on a suite.
    Bench {
        /// Directory of instance files, or FAMILY:COUNT:SEED.
        #[arg(long)]
        suite: String,
        /// Family parameter (key=value), repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check approximation guarantees against the best lower bound.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Algorithms to check (default: all that accept the instance).
        #[arg(long, value_parser = parse_alg)]
        alg: Vec<Algorithm>,
    },
    /// Convert a lateness instance to a cluster instance.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_alg(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Exit codes: 1 usage, 2 parse/validation, 3 solver or output failure.
enum Failure {
    Usage(String),
    Input(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Solver(m) => m,
        }
    }
}

fn input(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

fn solver(e: impl std::fmt::Display) -> Failure {
    Failure::Solver(e.to_string())
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(path: &Path, strict: bool) -> Result<Document, Failure> {
    parse_file(path, strict).map_err(input)
}

fn load_cc(path: &Path, strict: bool) -> Result<Instance, Failure> {
    match load(path, strict)? {
        Document::Cc(inst) => Ok(inst),
        Document::Lateness { name, instance } => {
            log::warn!("{name}: lateness instance, using its reduction");
            let mut inst = reduce_lateness(&instance).map_err(input)?;
            inst.name = name;
            Ok(inst)
        }
    }
}

/// Writes to `path`, or stdout when absent.
fn write_out(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let result = match path {
        Some(p) => File::create(p).and_then(|file| {
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()
        }),
        None => f(&mut io::stdout().lock()),
    };
    result.map_err(|e| Failure::Solver(format!("writing output: {e}")))
}

fn print_certificate(c: &RatioCertificate) {
    let source = match c.bound_source {
        BoundSource::Lp1 => "lp1",
        BoundSource::PdOptimum => "pd-optimum",
    };
    let guarantee = c.guaranteed.as_ref().map_or("none".to_string(), |g| format!("{:.6}", to_f64(g)));
    let verdict = match (&c.guaranteed, c.pass) {
        (None, _) => "n/a",
        (Some(_), true) => "pass",
        (Some(_), false) => "FAIL",
    };
    println!(
        "{:<8} objective {} bound {} ({source}) ratio {:.6} guarantee {guarantee} [{}] {verdict}",
        c.algorithm,
        format_q(&c.objective),
        format_q(&c.lower_bound),
        to_f64(&c.observed),
        c.instance_class,
    );
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let strict = cli.strict;
    match cli.command {
        Command::Solve { alg, input: path, out } => {
            let inst = load_cc(&path, strict)?;
            let schedule = run(&inst, alg).map_err(solver)?;
            let (bound, source) = lower_bound(&inst).map_err(solver)?;
            let mut cert = certificate_with_bound(&inst, alg.name(), &schedule.objective, &bound, guarantee_for(&inst, alg));
            cert.bound_source = source;
            println!("objective {}", format_q(&schedule.objective));
            print_certificate(&cert);
            if let Some(out) = out {
                write_out(Some(&out), |w| write_schedule(&schedule, w).map_err(io::Error::from))?;
            }
        }
        Command::Lp { input: path, dump, float } => {
            let inst = load_cc(&path, strict)?;
            let opts = LpOptions {
                mode: if float { LpMode::Float } else { LpMode::Exact },
                ..LpOptions::default()
            };
            let lp = solve_lp1_with(&inst, opts).map_err(solver)?;
            println!("lp1 {}", format_q(&lp.objective));
            println!("cuts {}", lp.cuts.len());
            println!("pivots {}", lp.pivots);
            if let Some(dump) = dump {
                write_out(Some(&dump), |w| write_lp_format(&inst, &lp.cuts, w))?;
            }
        }
        Command::Gen { family, params, seed, out } => {
            let fam = parse_family(&family, &params).map_err(usage)?;
            let doc = match generate(&fam, seed).map_err(usage)? {
                Generated::Cc(mut inst) => {
                    inst.name = format!("{family}-{seed}");
                    Document::Cc(inst)
                }
                Generated::Lateness(instance) => Document::Lateness {
                    name: format!("{family}-{seed}"),
                    instance,
                },
            };
            write_out(out.as_deref(), |w| w.write_all(emit(&doc).as_bytes()))?;
        }
        Command::Bench { suite, params, jobs, out } => {
            let instances = load_suite(&suite, &params, strict).map_err(|e| match e {
                Error::BadParams(_) => usage(e),
                e => input(e),
            })?;
            let records = bench_suite(&instances, jobs).map_err(solver)?;
            write_out(out.as_deref(), |w| write_csv(&records, w).map_err(io::Error::from))?;
            eprintln!("{}", summary(&records));
            let problems: Vec<String> = records.iter().flat_map(|r| r.problems()).collect();
            if !problems.is_empty() {
                return Err(Failure::Solver(problems.join("\n")));
            }
        }
        Command::Certify { input: path, alg } => {
            let inst = load_cc(&path, strict)?;
            let algs = if alg.is_empty() {
                Algorithm::ALL
                    .into_iter()
                    .filter(|a| a.supports_releases() || inst.has_zero_releases())
                    .collect()
            } else {
                alg
            };
            let (bound, source) = lower_bound(&inst).map_err(solver)?;
            let mut failed = Vec::new();
            for a in algs {
                let schedule = run(&inst, a).map_err(solver)?;
                let mut cert = certificate_with_bound(&inst, a.name(), &schedule.objective, &bound, guarantee_for(&inst, a));
                cert.bound_source = source;
                print_certificate(&cert);
                if !cert.pass {
                    failed.push(a.name());
                }
            }
            if !failed.is_empty() {
                return Err(Failure::Solver(format!("guarantee violated by {}", failed.join(", "))));
            }
        }
        Command::Reduce { input: path, out } => {
            let Document::Lateness { name, instance } = load(&path, strict)? else {
                return Err(Failure::Input(format!("{}: not a lateness instance", path.display())));
            };
            let mut inst = reduce_lateness(&instance).map_err(input)?;
            inst.name = if name.is_empty() { "reduced".into() } else { format!("{name}-reduced") };
            let text = emit(&Document::Cc(inst));
            match out {
                Some(p) => fs::write(&p, text).map_err(|e| Failure::Solver(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
