//! Nonlocal stiffness of a dilute two-phase composite.
//!
//! Given the matrix stiffness `C1`, the first-order effective stiffness `C_eq`
//! at inclusion volume fraction `f`, and the squared inertia radius `rho^2` of
//! the RVE, the leading-order sixth-order tensor is
//!
//! ```text
//! A_ijhlmn = -f rho^2 / 4 (Ct_ihln d_jm + Ct_ihmn d_jl + Ct_jhln d_im + Ct_jhmn d_il)
//! ```
//!
//! with `Ct = (C_eq - C1) / f`. Terms of higher order in `f` are dropped here;
//! the energy module measures what that costs.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;
use crate::tensor::{
    check_same, delta, BetaField, Definiteness, Dim, PairSym, SymmetricSubspace, Tensor3PairSym,
    Tensor4Elastic, Tensor6Sge, PD_REL_TOL,
};

/// Relative tolerance for the symmetry check of the assembled `A_eq`.
const ASSEMBLY_SYM_TOL: f64 = 1e-12;
/// Relative residual below which `Ct` is treated as isotropic.
const ISOTROPIC_FIT_TOL: f64 = 1e-12;
/// Relative singular-value threshold for the rank of the beta constraint.
pub const RANK_REL_TOL: f64 = 1e-12;

/// `(C_eq - C1) / f`.
pub fn c_tilde(c1: &Tensor4Elastic, c_eq: &Tensor4Elastic, f: f64) -> Result<Tensor4Elastic> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(Error::VolumeFraction(f));
    }
    Ok(c_eq.checked_sub(c1)?.scale(1.0 / f))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogenizationProblem {
    pub dim: Dim,
    pub c1: Tensor4Elastic,
    pub c_eq: Tensor4Elastic,
    pub f: f64,
    pub rho2: f64,
    /// Inclusion stiffness; only needed for RVE-side energy bounds.
    pub c2: Option<Tensor4Elastic>,
}

impl HomogenizationProblem {
    pub fn new(c1: Tensor4Elastic, c_eq: Tensor4Elastic, f: f64, rho2: f64) -> Result<Self> {
        let p = HomogenizationProblem {
            dim: c1.dim(),
            c1,
            c_eq,
            f,
            rho2,
            c2: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the problem from `Ct` instead of `C_eq`.
    pub fn from_c_tilde(c1: Tensor4Elastic, ct: &Tensor4Elastic, f: f64, rho2: f64) -> Result<Self> {
        let c_eq = c1.checked_add(&ct.scale(f))?;
        Self::new(c1, c_eq, f, rho2)
    }

    pub fn with_inclusion(mut self, c2: Tensor4Elastic) -> Result<Self> {
        check_same(self.dim, c2.dim())?;
        self.c2 = Some(c2);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_same(self.dim, self.c1.dim())?;
        check_same(self.dim, self.c_eq.dim())?;
        if !(self.f > 0.0 && self.f < 1.0) {
            return Err(Error::VolumeFraction(self.f));
        }
        if !(self.rho2 > 0.0) || !self.rho2.is_finite() {
            return Err(Error::NonPositive {
                what: "rho2",
                value: self.rho2,
            });
        }
        let eig_min = self.c1.eig_min_on_sym();
        match Definiteness::classify(eig_min, self.c1.norm(), PD_REL_TOL) {
            Definiteness::Positive => Ok(()),
            Definiteness::Borderline => Err(Error::Singular { eig_min }),
            Definiteness::NotPositive => Err(Error::Indefinite { eig_min }),
        }
    }

    pub fn c_tilde(&self) -> Result<Tensor4Elastic> {
        c_tilde(&self.c1, &self.c_eq, self.f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogenizationResult {
    pub a_eq: Tensor6Sge,
    pub c_tilde: Tensor4Elastic,
    /// `A_eq` positive definite beyond the tolerance band.
    pub pd_a: bool,
    pub definiteness_a: Definiteness,
    pub definiteness_neg_c_tilde: Definiteness,
    pub eig_min_a_eq: f64,
    pub eig_min_neg_c_tilde: f64,
    /// `(lambda, mu)` of `Ct` when it is isotropic.
    pub c_tilde_isotropic: Option<(f64, f64)>,
    /// Five isotropic constants of `A_eq` when `Ct` is isotropic.
    pub isotropic_a: Option<[f64; 5]>,
}

/// Component formula for `A_eq`, without any symmetrization.
pub fn effective_a_raw(ct: &Tensor4Elastic, f: f64, rho2: f64) -> Vec<f64> {
    let n = ct.dim().n();
    let s = -f * rho2 / 4.0;
    let mut raw = Vec::with_capacity(n.pow(6));
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        for q in 0..n {
                            raw.push(
                                s * (ct.get(i, h, l, q) * delta(j, m)
                                    + ct.get(i, h, m, q) * delta(j, l)
                                    + ct.get(j, h, l, q) * delta(i, m)
                                    + ct.get(j, h, m, q) * delta(i, l)),
                            );
                        }
                    }
                }
            }
        }
    }
    raw
}

/// Leading-order nonlocal stiffness and its definiteness diagnostics.
pub fn effective_a(problem: &HomogenizationProblem) -> Result<HomogenizationResult> {
    problem.validate()?;
    let ct = problem.c_tilde()?;
    let raw = effective_a_raw(&ct, problem.f, problem.rho2);
    let a_eq = Tensor6Sge::from_raw(problem.dim, &raw, ASSEMBLY_SYM_TOL)?;

    let eig_min_a_eq = a_eq.eig_min_on_sym();
    let definiteness_a = Definiteness::classify(eig_min_a_eq, a_eq.norm(), PD_REL_TOL);
    let neg = ct.scale(-1.0);
    let eig_min_neg_c_tilde = neg.eig_min_on_sym();
    let definiteness_neg_c_tilde = Definiteness::classify(eig_min_neg_c_tilde, neg.norm(), PD_REL_TOL);

    let (lt, mt, res) = ct.isotropic_fit();
    let c_tilde_isotropic = (res <= ISOTROPIC_FIT_TOL).then_some((lt, mt));
    let isotropic_a =
        c_tilde_isotropic.map(|(l, m)| isotropic_a_from_sol(l, m, problem.f, problem.rho2, problem.dim));

    Ok(HomogenizationResult {
        a_eq,
        c_tilde: ct,
        pd_a: definiteness_a.is_positive(),
        definiteness_a,
        definiteness_neg_c_tilde,
        eig_min_a_eq,
        eig_min_neg_c_tilde,
        c_tilde_isotropic,
        isotropic_a,
    })
}

/// Isotropic constants `a1..a5` of `A_eq` for an isotropic `Ct(lambda, mu)`.
/// Only `a2` and `a4 = a5` are non-zero; the result does not depend on the
/// dimension.
pub fn isotropic_a_from_sol(lambda_t: f64, mu_t: f64, f: f64, rho2: f64, _dim: Dim) -> [f64; 5] {
    let s = -0.5 * f * rho2;
    [0.0, s * lambda_t, 0.0, s * mu_t, s * mu_t]
}

/// Positive-definiteness conditions for an isotropic `A` in three dimensions,
/// written in terms of `a1..a5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MindlinEshel {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// `-a4 < a5`, `a5 < 2 a4`, `e1 > 0`, `e2 > 0`, `5 e3^2 < 2 e1 e2`.
    pub conditions: [bool; 5],
    pub holds: bool,
    /// Smallest slack of the five inequalities, normalized by `|a|` (and
    /// `|a|^2` for the quadratic one). Small values mean borderline.
    pub margin: f64,
}

pub fn mindlin_eshel(a: [f64; 5]) -> MindlinEshel {
    let [a1, a2, a3, a4, a5] = a;
    let e1 = -4.0 * a1 + 2.0 * a2 + 8.0 * a3 + 6.0 * a4 - 3.0 * a5;
    let e2 = 5.0 * (a1 + a2 + a3) + 3.0 * (a4 + a5);
    let e3 = a1 - 2.0 * a2 + 4.0 * a3;
    let slack = [a5 + a4, 2.0 * a4 - a5, e1, e2, 2.0 * e1 * e2 - 5.0 * e3 * e3];
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let conditions = slack.map(|s| s > 0.0);
    let margin = if norm > 0.0 {
        slack[..4]
            .iter()
            .map(|s| s / norm)
            .fold(slack[4] / (norm * norm), f64::min)
    } else {
        0.0
    };
    MindlinEshel {
        e1,
        e2,
        e3,
        conditions,
        holds: conditions.iter().all(|&c| c),
        margin,
    }
}

/// Equilibrium constraint `C_ijhk beta_hkj = 0` on quadratic displacement
/// fields `u_i = beta_ijk x_j x_k`.
#[derive(Clone, Debug)]
pub struct BetaConstraint {
    c: Tensor4Elastic,
    /// `n x dim(BetaField)` matrix in the orthonormal beta coordinates.
    matrix: DMatrix<f64>,
    /// Orthonormal basis of the row space (columns).
    row_basis: DMatrix<f64>,
    rank: usize,
}

/// `(C_ijhk beta_hkj)_i` evaluated directly from components.
pub fn constraint_residual(c: &Tensor4Elastic, beta: &BetaField) -> Result<Vec<f64>> {
    check_same(c.dim(), beta.dim())?;
    if beta.mode() != PairSym::Last {
        return Err(Error::PairMode);
    }
    let n = c.dim().n();
    Ok((0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for h in 0..n {
                    for k in 0..n {
                        s += c.get(i, j, h, k) * beta.get(h, k, j);
                    }
                }
            }
            s
        })
        .collect())
}

pub fn beta_constraint_matrix(c: &Tensor4Elastic) -> BetaConstraint {
    let dim = c.dim();
    let n = dim.n();
    let s = dim.pair_sym_dim();
    let mut matrix = DMatrix::zeros(n, s);
    for col in 0..s {
        let e = DVector::from_fn(s, |r, _| if r == col { 1.0 } else { 0.0 });
        let basis = Tensor3PairSym::from_coords(dim, PairSym::Last, &e).expect("length matches");
        let r = constraint_residual(c, &basis).expect("same dimension");
        for i in 0..n {
            matrix[(i, col)] = r[i];
        }
    }
    let svd = matrix.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&sv| smax > 0.0 && sv > RANK_REL_TOL * smax)
        .count();
    let mut row_basis = DMatrix::zeros(s, rank);
    let mut col = 0;
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if smax > 0.0 && sv > RANK_REL_TOL * smax {
            row_basis.set_column(col, &v_t.row(k).transpose());
            col += 1;
        }
    }
    BetaConstraint {
        c: c.clone(),
        matrix,
        row_basis,
        rank,
    }
}

impl BetaConstraint {
    pub fn dim(&self) -> Dim {
        self.c.dim()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the admissible subspace.
    pub fn kernel_dim(&self) -> usize {
        self.dim().pair_sym_dim() - self.rank
    }

    /// `(C_ijhk beta_hkj)_i` through the coordinate matrix.
    pub fn apply(&self, beta: &BetaField) -> Result<Vec<f64>> {
        check_same(self.dim(), beta.dim())?;
        if beta.mode() != PairSym::Last {
            return Err(Error::PairMode);
        }
        Ok((&self.matrix * beta.to_coords()).iter().copied().collect())
    }

    /// Orthogonal projection onto the admissible subspace.
    pub fn project(&self, beta: &BetaField) -> Result<BetaField> {
        check_same(self.dim(), beta.dim())?;
        if beta.mode() != PairSym::Last {
            return Err(Error::PairMode);
        }
        let mut v = beta.to_coords();
        // second pass removes what roundoff leaves of the row-space component
        for _ in 0..2 {
            let coef = self.row_basis.transpose() * &v;
            v -= &self.row_basis * coef;
        }
        BetaField::from_coords(self.dim(), PairSym::Last, &v)
    }

    /// Random admissible field with standard-normal coordinates before projection.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BetaField> {
        if self.kernel_dim() == 0 {
            return Err(Error::TrivialKernel);
        }
        let raw = sampling::beta(rng, self.dim());
        self.project(&raw)
    }
}

/// Seeded admissible `beta` for the stiffness `c`.
pub fn sample_admissible_beta(c: &Tensor4Elastic, seed: u64) -> Result<BetaField> {
    let mut rng = sampling::rng(seed, 0);
    beta_constraint_matrix(c).sample(&mut rng)
}
