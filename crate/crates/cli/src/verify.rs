//! Analytical derivatives checked against a reference oracle.

use clap::ValueEnum;
use nalgebra::DMatrix;
use sorbd::bench::{Algorithm, Sample};
use sorbd::derivatives::{fd_fo, fdsva_so, idsva_fo, idsva_so, StrategyConfig};
use sorbd::metrics::{error_report, ErrorReport};
use sorbd::model::Model;
use sorbd::oracles::*;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Bicomplex,
    Fd1,
    Fd2,
}

/// RMSRE threshold used when `--threshold` is not given.
pub fn default_threshold(algo: Algorithm, oracle: Oracle) -> Result<f64, CliError> {
    match (algo, oracle) {
        (Algorithm::IdsvaFo | Algorithm::FdFo | Algorithm::IdsvaSo, Oracle::Bicomplex) => Ok(1e-10),
        (Algorithm::FdsvaSo, Oracle::Bicomplex) => Ok(1e-8),
        (Algorithm::IdsvaSo | Algorithm::FdsvaSo, Oracle::Fd1) => Ok(1e-4),
        (Algorithm::IdsvaSo | Algorithm::FdsvaSo, Oracle::Fd2) => Ok(1e-6),
        _ => Err(unsupported(algo, oracle)),
    }
}

fn unsupported(algo: Algorithm, oracle: Oracle) -> CliError {
    CliError::Usage(format!(
        "cannot verify '{algo}' against '{}'; supported: idsva-fo and fd-fo with bicomplex, idsva-so and fdsva-so with any oracle",
        oracle.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default()
    ))
}

fn flat_report(a: &[&DMatrix<f64>], r: &[&DMatrix<f64>]) -> Result<ErrorReport, CliError> {
    let flat = |ms: &[&DMatrix<f64>]| ms.iter().flat_map(|m| m.iter().copied()).collect::<Vec<f64>>();
    Ok(ErrorReport::from_slices(&flat(a), &flat(r))?)
}

/// Errors of one analytical evaluation against the oracle. `step` overrides
/// the oracle's default finite-difference step.
pub fn verify_sample(
    algo: Algorithm,
    oracle: Oracle,
    model: &Model,
    s: &Sample,
    step: Option<f64>,
) -> Result<ErrorReport, CliError> {
    let (q, qd, qdd, tau) = (&s.state.q, &s.state.qd, &s.state.qdd, &s.tau);
    let fd1 = step.map_or_else(StepConfig::default, StepConfig::uniform);
    let fd2 = step.unwrap_or(FD2_STEP);
    match (algo, oracle) {
        (Algorithm::IdsvaFo, Oracle::Bicomplex) => {
            let a = idsva_fo(model, q, qd, qdd, None)?;
            let r = bicomplex_id_fo(model, q, qd, qdd)?;
            flat_report(&[&a.dtau_dq, &a.dtau_dqd, &a.dtau_dqdd], &[&r.dtau_dq, &r.dtau_dqd, &r.dtau_dqdd])
        }
        (Algorithm::FdFo, Oracle::Bicomplex) => {
            let a = fd_fo(model, q, qd, tau)?;
            let x = EvalPoint { q, v: qd, u: tau };
            let n = model.nv();
            let jac = |var: fn(usize) -> Var| -> Result<DMatrix<f64>, CliError> {
                let mut m = DMatrix::zeros(n, n);
                for j in 0..n {
                    m.set_column(j, &bicomplex_fo(&ForwardDynamics, model, &x, var(j), COMPLEX_STEP)?);
                }
                Ok(m)
            };
            let r = [jac(Var::Config)?, jac(Var::Velocity)?, jac(Var::Input)?];
            flat_report(&[&a.dfd_dq, &a.dfd_dqd, &a.dfd_dtau], &[&r[0], &r[1], &r[2]])
        }
        (Algorithm::IdsvaSo, _) => {
            let a = idsva_so(model, q, qd, qdd)?.stacked();
            let r = match oracle {
                Oracle::Bicomplex => bicomplex_id_so(model, q, qd, qdd)?,
                Oracle::Fd1 => finite_diff1_id_so(model, q, qd, qdd, fd1)?,
                Oracle::Fd2 => finite_diff2_id_so(model, q, qd, qdd, fd2)?,
            };
            Ok(error_report(&a, &r.stacked())?)
        }
        (Algorithm::FdsvaSo, _) => {
            let a = fdsva_so(model, q, qd, tau, &StrategyConfig::default())?.0.stacked();
            let r = match oracle {
                Oracle::Bicomplex => bicomplex_fd_so(model, q, qd, tau)?,
                Oracle::Fd1 => finite_diff1_fd_so(model, q, qd, tau, fd1)?,
                Oracle::Fd2 => finite_diff2_fd_so(model, q, qd, tau, fd2)?,
            };
            Ok(error_report(&a, &r.stacked())?)
        }
        _ => Err(unsupported(algo, oracle)),
    }
}

/// Elementwise maximum of several reports.
pub fn worst(reports: &[ErrorReport]) -> ErrorReport {
    reports.iter().fold(ErrorReport::default(), |w, r| ErrorReport {
        mae: w.mae.max(r.mae),
        rmsae: w.rmsae.max(r.rmsae),
        mre: w.mre.max(r.mre),
        rmsre: w.rmsre.max(r.rmsre),
        count: w.count.max(r.count),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sorbd::bench::random_samples;
    use sorbd::model::{serial_chain, GenOptions, JointPattern};

    #[test]
    fn every_supported_pair_passes_its_default_threshold() {
        let m = serial_chain(3, &GenOptions::with_pattern(JointPattern::mixed())).unwrap();
        let s = &random_samples(&m, 1, 3).unwrap()[0];
        for algo in [Algorithm::IdsvaFo, Algorithm::FdFo, Algorithm::IdsvaSo, Algorithm::FdsvaSo] {
            for oracle in [Oracle::Bicomplex, Oracle::Fd1, Oracle::Fd2] {
                match default_threshold(algo, oracle) {
                    Ok(t) => assert!(verify_sample(algo, oracle, &m, s, None).unwrap().rmsre <= t, "{algo} {oracle:?}"),
                    Err(_) => assert!(verify_sample(algo, oracle, &m, s, None).is_err()),
                }
            }
        }
        assert!(default_threshold(Algorithm::Rnea, Oracle::Bicomplex).is_err());
    }

    #[test]
    fn worst_takes_elementwise_maxima() {
        let a = ErrorReport { mae: 1.0, rmsae: 0.1, mre: 0.5, rmsre: 0.2, count: 4 };
        let b = ErrorReport { mae: 0.5, rmsae: 0.3, mre: 0.6, rmsre: 0.1, count: 4 };
        let w = worst(&[a, b]);
        assert_eq!((w.mae, w.rmsae, w.mre, w.rmsre), (1.0, 0.3, 0.6, 0.2));
    }
}
