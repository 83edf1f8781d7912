use serde::{Deserialize, Serialize};

use crate::batch::{map_indexed, Execution};
use crate::error::{Error, Result};
use crate::homog::{beta_constraint_matrix, effective_a, HomogenizationProblem};
use crate::sampling;
use crate::tensor::{Tensor4Elastic, Tensor6Sge};

use super::gap::{mismatch, EnergyReport, MismatchOptions};

/// Default acceptance threshold for `mismatch_rel`.
pub const CERTIFY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub mismatch: MismatchOptions,
    pub exec: Execution,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            samples: 20,
            seed: crate::DEFAULT_SEED,
            tol: CERTIFY_TOL,
            mismatch: MismatchOptions::default(),
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_mismatch_rel: f64,
    pub mismatch_ok: bool,
    /// Every sample with a sandwich verdict passed it.
    pub sandwich_ok: bool,
    pub reports: Vec<EnergyReport>,
}

/// Mismatch reports for `samples` admissible fields, each unit-norm and
/// drawn from its own stream `(seed, index)`.
pub fn certify(
    problem: &HomogenizationProblem,
    a: &Tensor6Sge,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    let ct = problem.c_tilde()?;
    let c_hat = opts.mismatch.c_hat.clone().unwrap_or(ct);
    let c_star = problem.c1.checked_add(&c_hat.scale(problem.f))?;
    let constraint = beta_constraint_matrix(&c_star);
    let reports = map_indexed(opts.exec, opts.samples, |k| -> Result<EnergyReport> {
        let mut rng = sampling::rng(opts.seed, k as u64);
        let b = constraint.sample(&mut rng)?;
        let b = b.scale(1.0 / b.norm());
        mismatch(problem, a, &b, &opts.mismatch)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let max_mismatch_rel = reports.iter().map(|r| r.mismatch_rel).fold(0.0, f64::max);
    Ok(Certificate {
        samples: opts.samples,
        seed: opts.seed,
        tol: opts.tol,
        max_mismatch_rel,
        mismatch_ok: max_mismatch_rel <= opts.tol,
        sandwich_ok: reports.iter().all(|r| r.sandwich_ok != Some(false)),
        reports,
    })
}

/// One volume fraction of an f-sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub f: f64,
    pub rho2_inclusion: f64,
    pub max_mismatch_rel: f64,
    /// Mean over samples of `(ub - lb) / (f Omega)` for the RVE bounds.
    pub rve_gap_over_f: f64,
    /// Mean over samples of `(ub_rve - W_rve) / (f Omega)`: the first-order
    /// RVE energy's distance to its kinematic bound.
    pub rve_remainder_over_f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    /// Log-log slope of `rve_gap_over_f` against `f`.
    pub gap_slope: f64,
    /// Log-log slope of `rve_remainder_over_f` against `f`.
    pub remainder_slope: f64,
    /// `rve_gap_over_f` strictly decreases as `f` decreases.
    pub gap_monotone: bool,
}

/// Fixed matrix, inclusion and dilute sensitivity; volume fraction and
/// inclusion inertia radius varied together.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSetup {
    pub c1: Tensor4Elastic,
    pub c2: Tensor4Elastic,
    pub c_tilde: Tensor4Elastic,
    pub rho2: f64,
    /// `(f, rho2_inclusion)` pairs.
    pub ladder: Vec<(f64, f64)>,
}

/// `(f, rho2_inclusion)` for an inclusion scaled homothetically from
/// `(f0, rho2_0)` in dimension `n`: `rho2 ~ f^(2/n)`.
pub fn homothetic_ladder(f0: f64, rho2_0: f64, n: usize, fs: &[f64]) -> Vec<(f64, f64)> {
    fs.iter()
        .map(|&f| (f, rho2_0 * (f / f0).powf(2.0 / n as f64)))
        .collect()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn fsweep(setup: &SweepSetup, opts: &CertifyOptions) -> Result<Sweep> {
    if setup.ladder.len() < 2 {
        return Err(Error::VolumeFraction(setup.ladder.first().map_or(0.0, |p| p.0)));
    }
    let mut points = Vec::with_capacity(setup.ladder.len());
    for &(f, r2) in &setup.ladder {
        let p = HomogenizationProblem::from_c_tilde(setup.c1.clone(), &setup.c_tilde, f, setup.rho2)?
            .with_inclusion(setup.c2.clone())?;
        let a = effective_a(&p)?.a_eq;
        let mut o = opts.clone();
        o.mismatch.rho2_inclusion = Some(r2);
        let cert = certify(&p, &a, &o)?;
        let m = cert.reports.len().max(1) as f64;
        let mut gap = 0.0;
        let mut rem = 0.0;
        for r in &cert.reports {
            let b = r.rve_bounds.as_ref().ok_or(Error::NonPositive {
                what: "inclusion stiffness eigenvalue",
                value: 0.0,
            })?;
            gap += (b.ub - b.lb) / (f * r.omega);
            rem += (b.ub - r.w_rve_beta) / (f * r.omega);
        }
        points.push(SweepPoint {
            f,
            rho2_inclusion: r2,
            max_mismatch_rel: cert.max_mismatch_rel,
            rve_gap_over_f: gap / m,
            rve_remainder_over_f: rem / m,
        });
    }
    let mut by_f: Vec<&SweepPoint> = points.iter().collect();
    by_f.sort_by(|a, b| a.f.total_cmp(&b.f));
    let gap_monotone = by_f.windows(2).all(|w| w[0].rve_gap_over_f < w[1].rve_gap_over_f);
    let fs: Vec<f64> = points.iter().map(|p| p.f).collect();
    let gaps: Vec<f64> = points.iter().map(|p| p.rve_gap_over_f).collect();
    let rems: Vec<f64> = points.iter().map(|p| p.rve_remainder_over_f.abs()).collect();
    Ok(Sweep {
        gap_slope: loglog_slope(&fs, &gaps),
        remainder_slope: loglog_slope(&fs, &rems),
        gap_monotone,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Dim;

    #[test]
    fn certificate_is_execution_independent() {
        let mut rng = sampling::rng(8, 0);
        let c1 = sampling::spd_c(&mut rng, Dim::Three, 0.5);
        let ct = sampling::sym_c(&mut rng, Dim::Three);
        let p = HomogenizationProblem::from_c_tilde(c1, &ct, 0.03, 0.7).unwrap();
        let a = effective_a(&p).unwrap().a_eq;
        let seq = certify(
            &p,
            &a,
            &CertifyOptions {
                exec: Execution::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let par = certify(&p, &a, &CertifyOptions::default()).unwrap();
        assert_eq!(seq, par);
        assert!(seq.mismatch_ok && seq.sandwich_ok);
        assert_eq!(seq.reports.len(), 20);
    }

    #[test]
    fn homothetic_ladder_scaling() {
        let l = homothetic_ladder(0.08, 0.2, 2, &[0.08, 0.02]);
        assert_eq!(l[0], (0.08, 0.2));
        assert!((l[1].1 - 0.05).abs() < 1e-15);
    }
}
