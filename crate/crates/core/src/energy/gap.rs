use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homog::HomogenizationProblem;
use crate::tensor::{
    check_same, BetaField, Definiteness, PairSym, SymmetricSubspace, Tensor2, Tensor2Sym, Tensor4Elastic,
    Tensor6Sge, PD_REL_TOL,
};

use super::fields::chi_from_beta;

/// Relative slack allowed in `lb <= W <= ub`.
pub const SANDWICH_TOL: f64 = 1e-10;

fn check_beta(beta: &BetaField) -> Result<()> {
    if beta.mode() != PairSym::Last {
        return Err(Error::PairMode);
    }
    Ok(())
}

/// `(C beta)_ijl = C_ijhk beta_hkl`, as one symmetric `(i,j)` slice per `l`.
fn c_beta(c: &Tensor4Elastic, beta: &BetaField) -> Vec<Tensor2Sym> {
    beta_slices(beta)
        .iter()
        .map(|s| c.apply(s).expect("same dimension"))
        .collect()
}

/// Symmetric parts of `beta_..l`. The slices are not symmetric themselves,
/// but every contraction here runs through a minor-symmetric stiffness.
fn beta_slices(beta: &BetaField) -> Vec<Tensor2Sym> {
    let dim = beta.dim();
    (0..dim.n())
        .map(|l| Tensor2Sym::from_fn(dim, |i, j| 0.5 * (beta.get(i, j, l) + beta.get(j, i, l))))
        .collect()
}

/// `sum_l X_ijl Y_ijl` over symmetric slices.
fn slice_dot(x: &[Tensor2Sym], y: &[Tensor2Sym]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.ddot(b).expect("same dimension"))
        .sum()
}

/// `sum_l X_ijl K_ijhk X_hkl`.
fn slice_quad(k: &Tensor4Elastic, x: &[Tensor2Sym]) -> f64 {
    x.iter().map(|s| k.quad(s).expect("same dimension")).sum()
}

/// `C_ijhk beta_ijl beta_hkl`.
pub fn c_beta_beta(c: &Tensor4Elastic, beta: &BetaField) -> Result<f64> {
    check_same(c.dim(), beta.dim())?;
    check_beta(beta)?;
    Ok(slice_quad(c, &beta_slices(beta)))
}

/// `A_jlikmh beta_ijl beta_hkm`, i.e. `chi:A:chi / 4` with `chi_abc = 2 beta_cab`.
pub fn a_beta_beta(a: &Tensor6Sge, beta: &BetaField) -> Result<f64> {
    check_same(a.dim(), beta.dim())?;
    check_beta(beta)?;
    Ok(0.25 * a.quad(&chi_from_beta(beta))?)
}

/// RVE energy under `u_i = beta_ijk x_j x_k`, first order in `f`:
/// `2 rho^2 Omega C1_ijhk beta_ijl beta_hkl`.
pub fn rve_energy_beta(c1: &Tensor4Elastic, beta: &BetaField, rho2: f64, omega: f64) -> Result<f64> {
    Ok(2.0 * rho2 * omega * c_beta_beta(c1, beta)?)
}

/// Equivalent second-gradient energy under the same data:
/// `2 Omega (rho^2 C_eq_ijhk d_lm + A_jlikmh) beta_ijl beta_hkm`.
pub fn sge_energy_beta(
    c_eq: &Tensor4Elastic,
    a: &Tensor6Sge,
    beta: &BetaField,
    rho2: f64,
    omega: f64,
) -> Result<f64> {
    check_same(c_eq.dim(), a.dim())?;
    Ok(2.0 * omega * (rho2 * c_beta_beta(c_eq, beta)? + a_beta_beta(a, beta)?))
}

/// The two terms of `(f rho^2 Ct_ijhk d_lm + A_jlikmh) beta_ijl beta_hkm`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annihilation {
    pub local: f64,
    pub nonlocal: f64,
    pub value: f64,
    /// `|value| / max(|local|, |nonlocal|)`, zero when both vanish.
    pub rel: f64,
}

pub fn annihilation_contraction(
    ct: &Tensor4Elastic,
    a: &Tensor6Sge,
    beta: &BetaField,
    f: f64,
    rho2: f64,
) -> Result<Annihilation> {
    let local = f * rho2 * c_beta_beta(ct, beta)?;
    let nonlocal = a_beta_beta(a, beta)?;
    let value = local + nonlocal;
    let scale = local.abs().max(nonlocal.abs());
    Ok(Annihilation {
        local,
        nonlocal,
        value,
        rel: if scale > 0.0 { value.abs() / scale } else { 0.0 },
    })
}

/// Which expression was used for the complementary nonlocal energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateRoute {
    /// `tau:A^-1:tau` with `A` positive definite.
    Inverse,
    /// `chi:A:chi`, equal to the above whenever `tau = A:chi` and `A` is
    /// invertible; used when `A` is not positive definite.
    Identity,
}

/// Kinematic upper and static lower estimates of an energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub ub: f64,
    pub lb: f64,
    /// Work of the trial stresses on the prescribed boundary data.
    pub work: f64,
    /// Complementary energy of the trial stresses.
    pub complementary: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SgeBounds {
    #[serde(flatten)]
    pub bounds: Bounds,
    pub route: ConjugateRoute,
}

/// Bounds on the second-gradient energy under quadratic data, with trial
/// stresses `sigma = C* eps`, `C* = C_eq + f (C_hat - Ct)`, and `tau = A chi`.
/// `beta` must be admissible for `C*`. Requires `C_eq` positive definite.
pub fn sge_bounds(
    problem: &HomogenizationProblem,
    a: &Tensor6Sge,
    c_hat: &Tensor4Elastic,
    beta: &BetaField,
    omega: f64,
) -> Result<SgeBounds> {
    let ct = problem.c_tilde()?;
    let c_star = problem
        .c_eq
        .checked_add(&c_hat.checked_sub(&ct)?.scale(problem.f))?;
    let c_eq_inv = problem.c_eq.inverse_on_sym()?;
    let e = problem.rho2 * omega;
    let chi = chi_from_beta(beta);
    let tau = a.apply(&chi)?;
    let chi_a_chi = tau.dot(&chi)?;

    let bs = beta_slices(beta);
    let ub = 2.0 * e * slice_quad(&problem.c_eq, &bs) + 0.5 * omega * chi_a_chi;
    let sb = c_beta(&c_star, beta);
    let work = 4.0 * e * slice_dot(&sb, &bs) + omega * chi_a_chi;
    let (tau_energy, route) = match a.definiteness() {
        Definiteness::Positive => (a.inverse_on_sym()?.quad(&tau)?, ConjugateRoute::Inverse),
        _ => (chi_a_chi, ConjugateRoute::Identity),
    };
    let complementary = 2.0 * e * slice_quad(&c_eq_inv, &sb) + 0.5 * omega * tau_energy;
    Ok(SgeBounds {
        bounds: Bounds {
            ub,
            lb: work - complementary,
            work,
            complementary,
        },
        route,
    })
}

/// Bounds on the heterogeneous RVE energy under quadratic data, with the
/// uniform trial stress `C* eps`, `C* = C1 + f C_hat`. The matrix and inclusion
/// second moments are `(rho^2 - f rho2^2) Omega I` and `f rho2^2 Omega I`.
#[allow(clippy::too_many_arguments)]
pub fn rve_bounds(
    c1: &Tensor4Elastic,
    c2: &Tensor4Elastic,
    c_hat: &Tensor4Elastic,
    f: f64,
    rho2: f64,
    rho2_inclusion: f64,
    beta: &BetaField,
    omega: f64,
) -> Result<Bounds> {
    check_same(c1.dim(), c2.dim())?;
    let e1 = (rho2 - f * rho2_inclusion) * omega;
    let e2 = f * rho2_inclusion * omega;
    if !(e1 > 0.0) || !(rho2_inclusion > 0.0) {
        return Err(Error::NonPositive {
            what: "phase second moment",
            value: e1.min(rho2_inclusion),
        });
    }
    let c_star = c1.checked_add(&c_hat.scale(f))?;
    let bs = beta_slices(beta);
    let sb = c_beta(&c_star, beta);
    let ub = 2.0 * (e1 * slice_quad(c1, &bs) + e2 * slice_quad(c2, &bs));
    let work = 4.0 * (e1 + e2) * slice_dot(&sb, &bs);
    let complementary =
        2.0 * (e1 * slice_quad(&c1.inverse_on_sym()?, &sb) + e2 * slice_quad(&c2.inverse_on_sym()?, &sb));
    Ok(Bounds {
        ub,
        lb: work - complementary,
        work,
        complementary,
    })
}

/// Energies divided by the reference volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub w_rve_beta: f64,
    pub w_sge_beta: f64,
    pub mismatch_g: f64,
    pub ub: Option<f64>,
    pub lb: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub omega: f64,
    pub w_rve_beta: f64,
    pub w_sge_beta: f64,
    /// `W_rve - W_sge`.
    pub mismatch_g: f64,
    /// `|G| / max(|W_rve|, |W_sge|)`.
    pub mismatch_rel: f64,
    /// `|C*_ijhk beta_hkj| / (|C*| |beta|)` for the trial stiffness.
    pub beta_residual: f64,
    pub ub: Option<f64>,
    pub lb: Option<f64>,
    /// `lb <= W_sge <= ub` within tolerance; absent without bounds or when a
    /// non-default `C_hat` is used.
    pub sandwich_ok: Option<bool>,
    pub sge_bounds: Option<SgeBounds>,
    pub rve_bounds: Option<Bounds>,
    pub normalized: Normalized,
    pub notes: Vec<String>,
}

pub const NOTE_RVE_ORDER: &str =
    "w_rve_beta is first order in f: the remainder of the heterogeneous energy beyond the matrix term is dropped";
pub const NOTE_SGE_ORDER: &str =
    "w_sge_beta is first order in f: A_eq and C_eq carry no terms of higher order in f";
pub const NOTE_NO_C_EQ_INVERSE: &str =
    "bounds omitted: C_eq is not positive definite, so its complementary energy is undefined";
pub const NOTE_CONJUGATE_IDENTITY: &str =
    "A_eq is not positive definite: the nonlocal complementary energy uses chi:A:chi in place of tau:A^-1:tau";
pub const NOTE_C_HAT: &str = "non-default C_hat: bounds are reported without asserting the sandwich";

/// Options for [`mismatch`].
#[derive(Clone, Debug, PartialEq)]
pub struct MismatchOptions {
    pub omega: f64,
    /// Auxiliary stiffness; `None` means `Ct`.
    pub c_hat: Option<Tensor4Elastic>,
    /// Inertia radius squared of the inclusion, for RVE-side bounds.
    pub rho2_inclusion: Option<f64>,
}

impl Default for MismatchOptions {
    fn default() -> Self {
        MismatchOptions {
            omega: 1.0,
            c_hat: None,
            rho2_inclusion: None,
        }
    }
}

/// Energy gap between the RVE and the equivalent second-gradient solid for
/// one quadratic data set `beta`.
pub fn mismatch(
    problem: &HomogenizationProblem,
    a: &Tensor6Sge,
    beta: &BetaField,
    opts: &MismatchOptions,
) -> Result<EnergyReport> {
    check_same(problem.dim, a.dim())?;
    check_same(problem.dim, beta.dim())?;
    check_beta(beta)?;
    let omega = opts.omega;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::NonPositive {
            what: "omega",
            value: omega,
        });
    }
    let ct = problem.c_tilde()?;
    let default_hat = opts.c_hat.is_none();
    let c_hat = opts.c_hat.clone().unwrap_or_else(|| ct.clone());
    check_same(problem.dim, c_hat.dim())?;

    let w_rve = rve_energy_beta(&problem.c1, beta, problem.rho2, omega)?;
    let w_sge = sge_energy_beta(&problem.c_eq, a, beta, problem.rho2, omega)?;
    let g = w_rve - w_sge;
    let scale = w_rve.abs().max(w_sge.abs());
    let mismatch_rel = if scale > 0.0 { g.abs() / scale } else { 0.0 };

    let c_star = problem.c1.checked_add(&c_hat.scale(problem.f))?;
    let res = crate::homog::constraint_residual(&c_star, beta)?;
    let res_norm = res.iter().map(|v| v * v).sum::<f64>().sqrt();
    let denom = c_star.norm() * beta.norm();
    let beta_residual = if denom > 0.0 { res_norm / denom } else { 0.0 };

    let mut notes = vec![NOTE_RVE_ORDER.to_string(), NOTE_SGE_ORDER.to_string()];
    let c_eq_pd = problem.c_eq.definiteness() == Definiteness::Positive;
    let sge = if c_eq_pd {
        let b = sge_bounds(problem, a, &c_hat, beta, omega)?;
        if b.route == ConjugateRoute::Identity {
            notes.push(NOTE_CONJUGATE_IDENTITY.to_string());
        }
        Some(b)
    } else {
        notes.push(NOTE_NO_C_EQ_INVERSE.to_string());
        None
    };
    if !default_hat {
        notes.push(NOTE_C_HAT.to_string());
    }
    let sandwich_ok = match (&sge, default_hat) {
        (Some(b), true) => {
            let slack = SANDWICH_TOL * b.bounds.ub.abs().max(1.0);
            Some(b.bounds.lb <= w_sge + slack && w_sge <= b.bounds.ub + slack)
        }
        _ => None,
    };
    let rve = match (&problem.c2, opts.rho2_inclusion) {
        (Some(c2), Some(r2)) if c2.definiteness() == Definiteness::Positive => Some(rve_bounds(
            &problem.c1,
            c2,
            &c_hat,
            problem.f,
            problem.rho2,
            r2,
            beta,
            omega,
        )?),
        _ => None,
    };
    let (ub, lb) = (
        sge.as_ref().map(|b| b.bounds.ub),
        sge.as_ref().map(|b| b.bounds.lb),
    );
    Ok(EnergyReport {
        omega,
        w_rve_beta: w_rve,
        w_sge_beta: w_sge,
        mismatch_g: g,
        mismatch_rel,
        beta_residual,
        ub,
        lb,
        sandwich_ok,
        sge_bounds: sge,
        rve_bounds: rve,
        normalized: Normalized {
            w_rve_beta: w_rve / omega,
            w_sge_beta: w_sge / omega,
            mismatch_g: g / omega,
            ub: ub.map(|v| v / omega),
            lb: lb.map(|v| v / omega),
        },
        notes,
    })
}

/// Difference between the uniform-strain energies of the RVE and of the
/// second-gradient solid under `u_i = alpha_ij x_j`. Both equal
/// `Omega/2 eps:C_eq:eps` (the curvature vanishes), so the result is zero up
/// to roundoff.
pub fn galpha_zero_check(c_eq: &Tensor4Elastic, alpha: &Tensor2, rho2: f64, omega: f64) -> Result<f64> {
    check_same(c_eq.dim(), alpha.dim())?;
    let _ = rho2;
    let eps = alpha.sym();
    // RVE side: C_eq is defined by energy equivalence under uniform strain
    let w_rve = 0.5 * omega * c_eq.apply(&eps)?.ddot(&eps)?;
    // second-gradient side: the same local term plus a vanishing curvature term
    let chi = crate::tensor::Tensor3PairSym::zeros(c_eq.dim(), PairSym::First);
    let w_sge = 0.5 * omega * c_eq.quad(&eps)? + 0.5 * omega * chi.dot(&chi)?;
    Ok(w_rve - w_sge)
}

/// True when `C_eq` admits the complementary energy needed for bounds.
pub fn bounds_available(problem: &HomogenizationProblem) -> bool {
    Definiteness::classify(problem.c_eq.eig_min_on_sym(), problem.c_eq.norm(), PD_REL_TOL).is_positive()
}
