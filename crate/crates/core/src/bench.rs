//! Runtime measurement, log-log slope fits, step-size sweeps and the
//! inner-term crossover calibration.
//!
//! Random states are generated before timing starts; only the algorithm
//! call is inside the timed region.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::derivatives::{
    fd_fo, fdsva_so, idsva_fo, idsva_so, idsva_so_into, inner_term, DmProduct, Idfoza, IdsvaSoWorkspace, Pair,
    StrategyConfig,
};
use crate::dynamics::{aba, compute_kinematics_cache, crba, rnea, KinematicsCache};
use crate::error::{Error, Result};
use crate::metrics::{error_report, ErrorReport};
use crate::model::{Model, State};
use crate::oracles::{
    bicomplex_fd_so, bicomplex_id_so, finite_diff1_fd_so, finite_diff1_id_so, finite_diff2_id_so, StepConfig,
    FD2_STEP,
};

/// Sample and warm-up counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimingConfig {
    pub samples: usize,
    pub warmups: usize,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            warmups: 10,
        }
    }
}

/// Wall-clock statistics in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Timing {
    pub median: f64,
    pub mean: f64,
    pub samples: usize,
}

/// Times `f` once per input after `warmups` untimed calls.
pub fn time_samples<S>(inputs: &[S], warmups: usize, mut f: impl FnMut(&S) -> Result<()>) -> Result<Timing> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    for w in 0..warmups {
        f(&inputs[w % inputs.len()])?;
    }
    let mut times = Vec::with_capacity(inputs.len());
    for x in inputs {
        let start = Instant::now();
        f(x)?;
        times.push(start.elapsed().as_secs_f64());
    }
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    let median = if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    };
    Ok(Timing {
        median,
        mean,
        samples: times.len(),
    })
}

/// Benchmarked algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Rnea,
    Aba,
    Crba,
    IdsvaFo,
    FdFo,
    IdsvaSo,
    FdsvaSo,
    /// FD1 stencils over inverse dynamics.
    Fd1,
    /// FD2 over the analytical first-order ID derivatives.
    Fd2,
    /// Complex step over inverse dynamics.
    Bicomplex,
    /// FD1 stencils over forward dynamics.
    Fd1Aba,
    /// Complex step over forward dynamics.
    BicomplexAba,
}

impl Algorithm {
    pub const ALL: [Algorithm; 12] = [
        Algorithm::Rnea,
        Algorithm::Aba,
        Algorithm::Crba,
        Algorithm::IdsvaFo,
        Algorithm::FdFo,
        Algorithm::IdsvaSo,
        Algorithm::FdsvaSo,
        Algorithm::Fd1,
        Algorithm::Fd2,
        Algorithm::Bicomplex,
        Algorithm::Fd1Aba,
        Algorithm::BicomplexAba,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rnea => "rnea",
            Algorithm::Aba => "aba",
            Algorithm::Crba => "crba",
            Algorithm::IdsvaFo => "idsva-fo",
            Algorithm::FdFo => "fd-fo",
            Algorithm::IdsvaSo => "idsva-so",
            Algorithm::FdsvaSo => "fdsva-so",
            Algorithm::Fd1 => "fd1",
            Algorithm::Fd2 => "fd2",
            Algorithm::Bicomplex => "bicomplex",
            Algorithm::Fd1Aba => "fd1-aba",
            Algorithm::BicomplexAba => "bicomplex-aba",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm '{s}'")))
    }
}

/// A random state with the torque that reproduces its acceleration.
#[derive(Clone, Debug)]
pub struct Sample {
    pub state: State,
    pub tau: DVector<f64>,
}

/// `count` reproducible random samples.
pub fn random_samples(model: &Model, count: usize, seed: u64) -> Result<Vec<Sample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let state = model.random_state(&mut rng);
            let tau = rnea(model, &state.q, &state.qd, &state.qdd, None)?;
            Ok(Sample { state, tau })
        })
        .collect()
}

/// Median and mean runtime of one algorithm on `cfg.samples` random states.
///
/// IDSVA-SO reuses one output workspace across calls, so the timed region
/// covers the kinematics pass and the tensor writes but not allocation.
pub fn bench_algorithm(algo: Algorithm, model: &Model, cfg: TimingConfig, seed: u64) -> Result<Timing> {
    let samples = random_samples(model, cfg.samples, seed)?;
    let w = cfg.warmups;
    let m = model;
    match algo {
        Algorithm::Rnea => time_samples(&samples, w, |s| rnea(m, &s.state.q, &s.state.qd, &s.state.qdd, None).map(drop)),
        Algorithm::Aba => time_samples(&samples, w, |s| aba(m, &s.state.q, &s.state.qd, &s.tau, None).map(drop)),
        Algorithm::Crba => time_samples(&samples, w, |s| crba(m, &s.state.q).map(drop)),
        Algorithm::IdsvaFo => {
            time_samples(&samples, w, |s| idsva_fo(m, &s.state.q, &s.state.qd, &s.state.qdd, None).map(drop))
        }
        Algorithm::FdFo => time_samples(&samples, w, |s| fd_fo(m, &s.state.q, &s.state.qd, &s.tau).map(drop)),
        Algorithm::IdsvaSo => {
            let mut ws = IdsvaSoWorkspace::new(m);
            time_samples(&samples, w, |s| {
                let c = compute_kinematics_cache(m, &s.state.q, &s.state.qd, &s.state.qdd, None)?;
                idsva_so_into(m, &c, &mut ws)
            })
        }
        Algorithm::FdsvaSo => {
            let strategy = StrategyConfig::default();
            time_samples(&samples, w, |s| fdsva_so(m, &s.state.q, &s.state.qd, &s.tau, &strategy).map(drop))
        }
        Algorithm::Fd1 => time_samples(&samples, w, |s| {
            finite_diff1_id_so(m, &s.state.q, &s.state.qd, &s.state.qdd, StepConfig::default()).map(drop)
        }),
        Algorithm::Fd2 => time_samples(&samples, w, |s| {
            finite_diff2_id_so(m, &s.state.q, &s.state.qd, &s.state.qdd, FD2_STEP).map(drop)
        }),
        Algorithm::Bicomplex => {
            time_samples(&samples, w, |s| bicomplex_id_so(m, &s.state.q, &s.state.qd, &s.state.qdd).map(drop))
        }
        Algorithm::Fd1Aba => time_samples(&samples, w, |s| {
            finite_diff1_fd_so(m, &s.state.q, &s.state.qd, &s.tau, StepConfig::default()).map(drop)
        }),
        Algorithm::BicomplexAba => {
            time_samples(&samples, w, |s| bicomplex_fd_so(m, &s.state.q, &s.state.qd, &s.tau).map(drop))
        }
    }
}

/// Least-squares fit of `log₁₀ t = A log₁₀ N + B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `log₁₀ t`.
    pub residual: f64,
}

pub fn fit_loglog(sizes: &[f64], times: &[f64]) -> Result<SlopeFit> {
    if sizes.len() != times.len() {
        return Err(Error::InvalidArgument(format!(
            "{} sizes but {} times",
            sizes.len(),
            times.len()
        )));
    }
    if sizes.len() < 4 {
        return Err(Error::InvalidArgument("a slope fit needs at least 4 points".into()));
    }
    if let Some(bad) = sizes.iter().chain(times).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!("sizes and times must be positive, got {bad}")));
    }
    let x: Vec<f64> = sizes.iter().map(|v| v.log10()).collect();
    let y: Vec<f64> = times.iter().map(|v| v.log10()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("sizes must not all be equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x.iter().zip(&y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    Ok(SlopeFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    })
}

/// Finite-difference oracle whose step is swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdMethod {
    Fd1,
    Fd2,
}

impl FromStr for FdMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fd1" => Ok(FdMethod::Fd1),
            "fd2" => Ok(FdMethod::Fd2),
            _ => Err(Error::InvalidArgument(format!("unknown finite-difference method '{s}'"))),
        }
    }
}

/// Error of one step size against the complex-step reference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub h: f64,
    pub report: ErrorReport,
}

/// `per_decade` logarithmically spaced steps from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && per_decade > 0) {
        return Err(Error::InvalidArgument(format!(
            "invalid range {lo}..{hi} with {per_decade} points per decade"
        )));
    }
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).round() as usize;
    Ok((0..=count)
        .map(|i| lo * 10f64.powf(i as f64 / per_decade as f64))
        .collect())
}

/// RMSRE of the stacked ID SO Hessian for each step (FD1 uses `h = k`).
pub fn step_sweep(method: FdMethod, model: &Model, state: &State, steps: &[f64]) -> Result<Vec<SweepPoint>> {
    let reference = bicomplex_id_so(model, &state.q, &state.qd, &state.qdd)?.stacked();
    steps
        .iter()
        .map(|&h| {
            let approx = match method {
                FdMethod::Fd1 => finite_diff1_id_so(model, &state.q, &state.qd, &state.qdd, StepConfig::uniform(h))?,
                FdMethod::Fd2 => finite_diff2_id_so(model, &state.q, &state.qd, &state.qdd, h)?,
            };
            Ok(SweepPoint {
                h,
                report: error_report(&approx.stacked(), &reference)?,
            })
        })
        .collect()
}

/// The sweep point with the smallest RMSRE.
pub fn best_step(points: &[SweepPoint]) -> Option<SweepPoint> {
    points.iter().copied().min_by(|a, b| a.report.rmsre.total_cmp(&b.report.rmsre))
}

/// Inner-term runtimes of both strategies at one model size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossoverPoint {
    pub num_bodies: usize,
    pub dtm: Timing,
    pub idfoza: Timing,
}

struct InnerInputs {
    cache: KinematicsCache<f64>,
    fo: crate::derivatives::FdFirstOrder,
    so: crate::derivatives::IdSecondOrder,
}

/// Times the `q-q` and mixed inner terms with each strategy.
pub fn time_inner_terms(model: &Model, cfg: TimingConfig, seed: u64) -> Result<CrossoverPoint> {
    let inputs = random_samples(model, cfg.samples, seed)?
        .into_iter()
        .map(|s| {
            let fo = fd_fo(model, &s.state.q, &s.state.qd, &s.tau)?;
            let cache = compute_kinematics_cache(model, &s.state.q, &s.state.qd, &fo.qdd, None)?;
            let so = idsva_so(model, &s.state.q, &s.state.qd, &fo.qdd)?;
            Ok(InnerInputs { cache, fo, so })
        })
        .collect::<Result<Vec<_>>>()?;
    let run = |x: &InnerInputs, dm: &mut DmProduct<'_>| -> Result<()> {
        inner_term(Pair::QQ, &x.so, &x.fo, dm)?;
        inner_term(Pair::QdQ, &x.so, &x.fo, dm)?;
        Ok(())
    };
    let dtm = time_samples(&inputs, cfg.warmups, |x| run(x, &mut DmProduct::Dense(&x.so.dm_dq)))?;
    let idfoza = time_samples(&inputs, cfg.warmups, |x| {
        run(x, &mut DmProduct::Idfoza(Box::new(Idfoza::from_cache(model, x.cache.clone()))))
    })?;
    Ok(CrossoverPoint {
        num_bodies: model.num_bodies(),
        dtm,
        idfoza,
    })
}

/// Smallest measured size from which IDFOZA is faster at every larger
/// measured size, by median time.
pub fn find_crossover(points: &[CrossoverPoint]) -> Option<usize> {
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.num_bodies);
    let mut found = None;
    for p in sorted.iter().rev() {
        if p.idfoza.median < p.dtm.median {
            found = Some(p.num_bodies);
        } else {
            break;
        }
    }
    found
}
