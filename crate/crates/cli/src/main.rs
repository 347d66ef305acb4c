//! `sorbd` command-line front end: timing, oracle verification, step-size
//! sweeps, crossover calibration and model generation.

mod model_select;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use sorbd::bench::{
    bench_algorithm, best_step, find_crossover, fit_loglog, log_spaced, random_samples, step_sweep, time_inner_terms,
    Algorithm, FdMethod, TimingConfig,
};
use sorbd::model::{write_model, JointPattern};

use model_select::{Generator, ModelSelector};
use output::{num, Table};
use verify::Oracle;

/// Environment variable setting the worker count for `verify`.
const THREADS_ENV: &str = "SORBD_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sorbd::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Parser)]
#[command(name = "sorbd", version, about = "Second-order rigid-body dynamics derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// chain:N, bintree:N, file:PATH, or chain/bintree together with --sizes.
    #[arg(long)]
    model: ModelSelector,
    /// Joint pattern for generated models: revolute-cycle, mixed, or a
    /// comma-separated cycle of joint kinds.
    #[arg(long, default_value = "revolute-cycle", value_parser = JointPattern::from_str)]
    joint: JointPattern,
    /// Replace the root joint by a floating joint.
    #[arg(long)]
    floating_base: bool,
}

impl ModelArgs {
    fn generator(&self) -> Generator {
        Generator {
            pattern: self.joint.clone(),
            floating_base: self.floating_base,
        }
    }
}

/// `lo..hi` step range.
#[derive(Clone, Copy, Debug)]
struct StepRange(f64, f64);

impl FromStr for StepRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got '{s}'"))?;
        let p = |x: &str| x.parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        Ok(StepRange(p(lo)?, p(hi)?))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Time algorithms over model sizes and write CSV. Runs on one thread.
    Bench {
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', required = true)]
        algo: Vec<Algorithm>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        warmups: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path, or - for stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Compare an analytical derivative with an oracle; exits 1 if the
    /// worst RMSRE exceeds the threshold.
    Verify {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long, value_enum, default_value_t = Oracle::Bicomplex)]
        oracle: Oracle,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// RMSRE threshold; defaults depend on the algorithm and oracle.
        #[arg(long)]
        threshold: Option<f64>,
        /// Finite-difference step for the fd1 and fd2 oracles.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Error of a finite-difference oracle across step sizes.
    SweepStep {
        #[arg(long)]
        method: FdMethod,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "1e-8..1e-1")]
        h: StepRange,
        #[arg(long, default_value_t = 4)]
        per_decade: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Time both inner-term strategies over model sizes and report the
    /// size from which IDFOZA wins.
    CalibrateCrossover {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30,40,50,60,70,80,90,100,120")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        warmups: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Write a generated model in the text model format.
    GenModel {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Bench {
            algo,
            model,
            sizes,
            samples,
            warmups,
            seed,
            out,
        } => {
            let cfg = TimingConfig { samples, warmups };
            let models = model.model.build_all(&sizes, &model.generator())?;
            let mut table = Table::new(
                &out,
                "bench",
                &["algorithm", "model", "num_bodies", "nv", "samples", "warmups", "seed", "median_s", "mean_s"],
            )?;
            for a in &algo {
                let mut times = Vec::new();
                for m in &models {
                    let t = bench_algorithm(*a, &m.model, cfg, seed)?;
                    table.row(&[
                        a.to_string(),
                        m.label.clone(),
                        m.model.num_bodies().to_string(),
                        m.model.nv().to_string(),
                        samples.to_string(),
                        warmups.to_string(),
                        seed.to_string(),
                        num(t.median),
                        num(t.mean),
                    ])?;
                    times.push((m.model.num_bodies() as f64, t.median));
                }
                if times.len() >= 4 {
                    let (n, t): (Vec<f64>, Vec<f64>) = times.into_iter().unzip();
                    let fit = fit_loglog(&n, &t)?;
                    eprintln!("{a}: slope A = {:.3}, intercept B = {:.3}, residual {:.3e}", fit.slope, fit.intercept, fit.residual);
                }
            }
            table.finish()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            algo,
            oracle,
            model,
            samples,
            seed,
            threshold,
            step,
        } => {
            let threshold = match threshold {
                Some(t) => t,
                None => verify::default_threshold(algo, oracle)?,
            };
            let m = model.model.build_one(&model.generator())?;
            let states = random_samples(&m.model, samples.max(1), seed)?;
            let reports = thread_pool()?.install(|| {
                states
                    .par_iter()
                    .map(|s| verify::verify_sample(algo, oracle, &m.model, s, step))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            for (i, r) in reports.iter().enumerate() {
                println!(
                    "sample {i}: mae={:.3e} rmsae={:.3e} mre={:.3e} rmsre={:.3e} count={}",
                    r.mae, r.rmsae, r.mre, r.rmsre, r.count
                );
            }
            let w = verify::worst(&reports);
            println!(
                "{algo} vs {oracle:?} on {}: worst mae={:.3e} rmsae={:.3e} mre={:.3e} rmsre={:.3e}",
                m.label, w.mae, w.rmsae, w.mre, w.rmsre
            );
            if w.rmsre <= threshold {
                println!("PASS: rmsre {:.3e} <= {threshold:.1e}", w.rmsre);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL: rmsre {:.3e} > {threshold:.1e}", w.rmsre);
                Ok(ExitCode::FAILURE)
            }
        }
        Command::SweepStep {
            method,
            model,
            h,
            per_decade,
            seed,
            out,
        } => {
            let m = model.model.build_one(&model.generator())?;
            let state = &random_samples(&m.model, 1, seed)?[0].state;
            let steps = log_spaced(h.0, h.1, per_decade)?;
            let points = step_sweep(method, &m.model, state, &steps)?;
            let mut table = Table::new(&out, "sweep", &["method", "model", "h", "mae", "rmsae", "mre", "rmsre"])?;
            let name = match method {
                FdMethod::Fd1 => "fd1",
                FdMethod::Fd2 => "fd2",
            };
            for p in &points {
                let r = p.report;
                table.row(&[name.into(), m.label.clone(), num(p.h), num(r.mae), num(r.rmsae), num(r.mre), num(r.rmsre)])?;
            }
            table.finish()?;
            if let Some(b) = best_step(&points) {
                eprintln!("best h = {:.3e} (rmsre {:.3e})", b.h, b.report.rmsre);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CalibrateCrossover {
            model,
            sizes,
            samples,
            warmups,
            seed,
            out,
        } => {
            let cfg = TimingConfig { samples, warmups };
            let models = model.model.build_all(&sizes, &model.generator())?;
            let mut table = Table::new(&out, "crossover", &["model", "num_bodies", "dtm_median_s", "idfoza_median_s"])?;
            let mut points = Vec::new();
            for m in &models {
                let p = time_inner_terms(&m.model, cfg, seed)?;
                table.row(&[m.label.clone(), p.num_bodies.to_string(), num(p.dtm.median), num(p.idfoza.median)])?;
                points.push(p);
            }
            table.finish()?;
            match find_crossover(&points) {
                Some(n) => eprintln!("inner-term crossover N* = {n}"),
                None => eprintln!("inner-term crossover not reached in the measured sizes"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GenModel { model, out } => {
            let m = model.model.build_one(&model.generator())?;
            let mut w = output::open(&out)?;
            w.write_all(write_model(&m.model).as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n = v
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a thread count, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}
