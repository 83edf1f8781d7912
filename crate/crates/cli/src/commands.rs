use std::fs;
use std::path::Path;

use log::{info, warn};
use serde::de::DeserializeOwned;
use serde::Serialize;

use mindlin_core::energy::{certify, fsweep, homothetic_ladder, CertifyOptions, MismatchOptions, SweepSetup};
use mindlin_core::geometry::{check_gp, gp3_sweep, homothetic_family, ShapeSpec};
use mindlin_core::homog::{effective_a, mindlin_eshel};
use mindlin_core::tensor::PD_REL_TOL;
use mindlin_core::{Definiteness, Dim, SymmetricSubspace};

use crate::error::{CliError, CliResult};
use crate::report::*;
use crate::schema::*;

/// Volume fractions of the f-sweep ladder.
pub const SWEEP_FS: [f64; 4] = [0.08, 0.04, 0.02, 0.01];

pub const NOTE_FIRST_ORDER: &str =
    "A_eq is the first-order term in f; contributions of higher order in f are not included";
pub const NOTE_RHO_DEPENDENCE: &str =
    "A_eq is proportional to rho2, the squared inertia radius of the chosen RVE, and so depends on the RVE size";

/// A finished report, possibly carrying a failed check. The report is
/// written either way.
pub struct Outcome {
    pub json: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, failure: Option<CliError>) -> CliResult<Self> {
        let json = to_json(report).map_err(|e| CliError::Other(format!("cannot serialize report: {e}")))?;
        Ok(Outcome { json, failure })
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

pub fn write_output(path: Option<&Path>, json: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, json).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn core(context: &'static str) -> impl Fn(mindlin_core::Error) -> CliError {
    move |e| CliError::from_core(context, e)
}

fn certify_options(r: &Resolved) -> CertifyOptions {
    CertifyOptions {
        samples: r.settings.samples,
        seed: r.settings.seed,
        tol: r.settings.tol,
        mismatch: MismatchOptions {
            omega: r.settings.omega,
            c_hat: r.c_hat.clone(),
            rho2_inclusion: r.rho2_inclusion,
        },
        ..CertifyOptions::default()
    }
}

fn certificate_failure(max_rel: f64, tol: f64, mismatch_ok: bool, sandwich_ok: bool) -> Option<CliError> {
    if !mismatch_ok {
        Some(CliError::Certification(format!(
            "energy mismatch {max_rel:e} exceeds tolerance {tol:e}"
        )))
    } else if !sandwich_ok {
        Some(CliError::Certification(
            "energy bounds do not bracket the RVE energy".into(),
        ))
    } else {
        None
    }
}

fn flush_warnings(warnings: &[String]) {
    for w in warnings {
        warn!("{w}");
    }
}

pub fn homogenize(file: &ProblemFile, ov: Overrides) -> CliResult<Outcome> {
    let mut r = file.resolve(ov)?;
    if file.a_eq.is_some() {
        r.warnings
            .push("a_eq is ignored by homogenize; use verify-energy to check it".into());
    }
    info!(
        "homogenizing: dim {}, f {}, rho2 {}",
        r.problem.dim.n(),
        r.problem.f,
        r.problem.rho2
    );
    let res = effective_a(&r.problem).map_err(core("homogenize"))?;
    let mindlin = match (res.isotropic_a, r.problem.dim) {
        (Some(a), Dim::Three) => Some(mindlin_eshel(a)),
        _ => None,
    };
    info!(
        "certifying with {} samples, seed {}",
        r.settings.samples, r.settings.seed
    );
    let cert = certify(&r.problem, &res.a_eq, &certify_options(&r)).map_err(core("certify"))?;
    let failure = certificate_failure(
        cert.max_mismatch_rel,
        cert.tol,
        cert.mismatch_ok,
        cert.sandwich_ok,
    );
    flush_warnings(&r.warnings);

    let report = HomogenizeReport {
        tool: ToolInfo::current(),
        seed: r.settings.seed,
        input: file.clone(),
        geometry: r.gp,
        homogenization: HomogenizationRecord {
            dim: r.problem.dim.n(),
            f: r.problem.f,
            rho2: r.problem.rho2,
            c_tilde: nest4(&res.c_tilde),
            a_eq: nest6(&res.a_eq),
            pd_a: res.pd_a,
            definiteness_a: res.definiteness_a,
            definiteness_neg_c_tilde: res.definiteness_neg_c_tilde,
            eig_min_a_eq: res.eig_min_a_eq,
            eig_min_neg_c_tilde: res.eig_min_neg_c_tilde,
            c_tilde_isotropic: res.c_tilde_isotropic.map(|(l, m)| [l, m]),
            isotropic_a: res.isotropic_a,
            mindlin_eshel: mindlin,
            notes: vec![NOTE_FIRST_ORDER.into(), NOTE_RHO_DEPENDENCE.into()],
        },
        certificate: cert,
        warnings: r.warnings,
    };
    Outcome::new(&report, failure)
}

fn sweep_ladder(file: &ProblemFile, r: &Resolved, warnings: &mut Vec<String>) -> CliResult<Vec<(f64, f64)>> {
    let Some(g) = &file.geometry else {
        let r2i = r
            .rho2_inclusion
            .ok_or_else(|| CliError::Schema("--fsweep needs `geometry` or `rho2_inclusion`".into()))?;
        return Ok(homothetic_ladder(r.problem.f, r2i, r.problem.dim.n(), &SWEEP_FS));
    };
    let family = match &g.inclusion_family {
        Some(fam) => fam.clone(),
        None => homothetic_family(&g.rve, &g.inclusion, &SWEEP_FS).map_err(core("geometry"))?,
    };
    let gp_tol = file.options.gp_tol;
    let gp3 = gp3_sweep(&g.rve, &family, gp_tol).map_err(core("geometry.inclusion_family"))?;
    if !gp3.vanishing {
        warnings.push(gp3_warning(gp3.slope));
    }
    family
        .iter()
        .map(|inc| {
            let rep = check_gp(&g.rve, inc, gp_tol).map_err(core("geometry.inclusion_family"))?;
            Ok((rep.f, rep.rho_inclusion * rep.rho_inclusion))
        })
        .collect()
}

fn gp3_warning(slope: f64) -> String {
    format!(
        "inclusion inertia radius does not vanish with f (log-log slope {slope:.3}); o(f) terms may not decay"
    )
}

pub fn verify_energy(file: &ProblemFile, ov: Overrides, with_sweep: bool) -> CliResult<Outcome> {
    let mut r = file.resolve(ov)?;
    let (a, a_source) = match r.a_external.take() {
        Some(a) => (a, ASource::Input),
        None => (
            effective_a(&r.problem).map_err(core("homogenize"))?.a_eq,
            ASource::Computed,
        ),
    };
    let opts = certify_options(&r);
    info!("certifying with {} samples, seed {}", opts.samples, opts.seed);
    let cert = certify(&r.problem, &a, &opts).map_err(core("certify"))?;
    let summary = CertificateSummary::from(&cert);
    let mut failure = certificate_failure(
        cert.max_mismatch_rel,
        cert.tol,
        cert.mismatch_ok,
        cert.sandwich_ok,
    );

    let sweep = if with_sweep {
        let c2 =
            r.problem.c2.clone().ok_or_else(|| {
                CliError::Schema("--fsweep needs the inclusion stiffness `inclusion`".into())
            })?;
        let mut sweep_warnings = Vec::new();
        let ladder = sweep_ladder(file, &r, &mut sweep_warnings)?;
        r.warnings.extend(sweep_warnings);
        if a_source == ASource::Input {
            r.warnings
                .push("the f-sweep uses the computed A_eq at each volume fraction".into());
        }
        info!("f-sweep over {} volume fractions", ladder.len());
        let setup = SweepSetup {
            c1: r.problem.c1.clone(),
            c2,
            c_tilde: r.problem.c_tilde().map_err(core("problem"))?,
            rho2: r.problem.rho2,
            ladder,
        };
        let s = fsweep(&setup, &opts).map_err(core("fsweep"))?;
        if !s.gap_monotone {
            r.warnings.push(format!(
                "(ub - lb)/f does not decrease with f along the sweep (slope {:.3})",
                s.gap_slope
            ));
        }
        if failure.is_none() {
            if let Some(p) = s.points.iter().find(|p| p.max_mismatch_rel > opts.tol) {
                failure = Some(CliError::Certification(format!(
                    "energy mismatch {:e} at f = {} exceeds tolerance {:e}",
                    p.max_mismatch_rel, p.f, opts.tol
                )));
            }
        }
        Some(s)
    } else {
        None
    };
    flush_warnings(&r.warnings);

    let report = EnergyRunReport {
        tool: ToolInfo::current(),
        seed: r.settings.seed,
        input: file.clone(),
        geometry: r.gp,
        a_source,
        summary,
        energy: cert.reports,
        fsweep: sweep,
        warnings: r.warnings,
    };
    Outcome::new(&report, failure)
}

pub fn geometry(file: &ShapesFile, tol: Option<f64>, with_sweep: bool) -> CliResult<Outcome> {
    check_version(file.version)?;
    let tol = tol.or(file.tol);
    let gp = check_gp(&file.rve, &file.inclusion, tol).map_err(core("geometry"))?;
    let mut warnings = gp_warnings(&gp);
    if gp.f > DILUTE_WARN_F {
        warnings.push(format!(
            "f = {} exceeds {DILUTE_WARN_F}; the inclusion is not dilute",
            gp.f
        ));
    }
    let gp3 = if with_sweep {
        let family: Vec<ShapeSpec> = match &file.inclusion_family {
            Some(fam) => fam.clone(),
            None => homothetic_family(&file.rve, &file.inclusion, &SWEEP_FS).map_err(core("geometry"))?,
        };
        let s = gp3_sweep(&file.rve, &family, tol).map_err(core("inclusion_family"))?;
        if !s.vanishing {
            warnings.push(gp3_warning(s.slope));
        }
        Some(s)
    } else {
        None
    };
    flush_warnings(&warnings);
    let report = GeometryReport {
        tool: ToolInfo::current(),
        input: file.clone(),
        gp,
        gp3,
        warnings,
    };
    Outcome::new(&report, None)
}

pub fn check_pd(file: &TensorFile) -> CliResult<Outcome> {
    check_version(file.version)?;
    let dim = parse_dim(file.dim)?;
    let n = dim.n() as f64;
    let sym_tol = file.sym_tol.unwrap_or(SYM_TOL);
    let mut warnings = Vec::new();

    let (eig_min, norm, isotropic_c, mindlin) = match (&file.c, &file.a) {
        (Some(spec), None) => {
            let c = spec.to_tensor(dim, sym_tol, "c")?;
            let iso = spec.lame().map(|(l, m)| {
                let (bulk, shear) = (n * l + 2.0 * m, 2.0 * m);
                IsotropicCheck {
                    bulk,
                    shear,
                    holds: bulk > 0.0 && shear > 0.0,
                }
            });
            (c.eig_min_on_sym(), c.norm(), iso, None)
        }
        (None, Some(spec)) => {
            let a = spec.to_tensor(dim, sym_tol, "a")?;
            let me = match (spec, dim) {
                (SgeTensorSpec::IsotropicA(coef), Dim::Three) => Some(mindlin_eshel(*coef)),
                (SgeTensorSpec::IsotropicA(_), Dim::Two) => {
                    warnings.push(
                        "closed-form conditions on a1..a5 are three-dimensional; eigenvalue route only"
                            .into(),
                    );
                    None
                }
                _ => None,
            };
            (a.eig_min_on_sym(), a.norm(), None, me)
        }
        (Some(_), Some(_)) => return Err(CliError::Schema("give only one of `c` and `a`".into())),
        (None, None) => return Err(CliError::Schema("one of `c` or `a` is required".into())),
    };
    let definiteness = Definiteness::classify(eig_min, norm, PD_REL_TOL);
    let pd = definiteness.is_positive();

    let closed_form = isotropic_c
        .as_ref()
        .map(|c| (c.holds, c.bulk.min(c.shear) / norm.max(f64::MIN_POSITIVE)))
        .or(mindlin.map(|m| (m.holds, m.margin)));
    let borderline = definiteness == Definiteness::Borderline;
    let routes_agree = match closed_form {
        Some((holds, _)) if holds == pd => Some(true),
        Some((_, margin)) if borderline || margin.abs() <= PD_REL_TOL => {
            warnings.push("verdicts differ inside the tolerance band; the tensor is borderline".into());
            None
        }
        Some(_) => Some(false),
        None => None,
    };
    let failure = (routes_agree == Some(false))
        .then(|| CliError::Certification("closed-form and eigenvalue definiteness verdicts disagree".into()));
    flush_warnings(&warnings);

    let report = PdReport {
        tool: ToolInfo::current(),
        input: file.clone(),
        eig_min,
        norm,
        definiteness,
        pd,
        isotropic_c,
        mindlin_eshel: mindlin,
        routes_agree,
        warnings,
    };
    Outcome::new(&report, failure)
}
