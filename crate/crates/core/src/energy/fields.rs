use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    check_same, delta, BetaField, Dim, PairSym, Tensor2, Tensor2Sym, Tensor3PairSym, Tensor4Elastic,
    Tensor6Sge,
};

/// Boundary data `u_i = alpha_ij x_j + beta_ijk x_j x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticBC {
    pub alpha: Tensor2,
    pub beta: BetaField,
}

impl QuadraticBC {
    pub fn new(alpha: Tensor2, beta: BetaField) -> Result<Self> {
        check_same(alpha.dim(), beta.dim())?;
        if beta.mode() != PairSym::Last {
            return Err(Error::PairMode);
        }
        Ok(QuadraticBC { alpha, beta })
    }

    pub fn dim(&self) -> Dim {
        self.alpha.dim()
    }

    pub fn displacement(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim().n();
        (0..n)
            .map(|i| {
                let mut u = 0.0;
                for j in 0..n {
                    u += self.alpha.get(i, j) * x[j];
                    for k in 0..n {
                        u += self.beta.get(i, j, k) * x[j] * x[k];
                    }
                }
                u
            })
            .collect()
    }
}

/// Strain, curvature and the conjugate stresses at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Fields {
    pub eps: Tensor2Sym,
    pub chi: Tensor3PairSym,
    pub sigma: Tensor2Sym,
    pub tau: Tensor3PairSym,
}

/// `chi_ijk = 2 beta_kij`, constant in space.
pub fn chi_from_beta(beta: &BetaField) -> Tensor3PairSym {
    Tensor3PairSym::chi_from_fn(beta.dim(), |i, j, k| 2.0 * beta.get(k, i, j))
}

pub fn fields_from_quadratic(
    bc: &QuadraticBC,
    c: &Tensor4Elastic,
    a: &Tensor6Sge,
    x: &[f64],
) -> Result<Fields> {
    let dim = bc.dim();
    check_same(dim, c.dim())?;
    check_same(dim, a.dim())?;
    if x.len() != dim.n() {
        return Err(Error::DimMismatch {
            left: dim.n(),
            right: x.len(),
        });
    }
    let n = dim.n();
    let eps = Tensor2Sym::from_fn(dim, |i, j| {
        0.5 * (bc.alpha.get(i, j) + bc.alpha.get(j, i))
            + (0..n)
                .map(|k| (bc.beta.get(i, j, k) + bc.beta.get(j, i, k)) * x[k])
                .sum::<f64>()
    });
    let chi = chi_from_beta(&bc.beta);
    Ok(Fields {
        sigma: c.apply(&eps)?,
        tau: a.apply(&chi)?,
        eps,
        chi,
    })
}

/// `1/2 eps:C:eps + 1/2 chi:A:chi`.
pub fn sge_energy_density(
    eps: &Tensor2Sym,
    chi: &Tensor3PairSym,
    c: &Tensor4Elastic,
    a: &Tensor6Sge,
) -> Result<f64> {
    Ok(0.5 * c.quad(eps)? + 0.5 * a.quad(chi)?)
}

/// Every contraction listed for each isotropic curvature invariant; entry 0
/// is the primary form.
pub fn chi_invariant_forms(chi: &Tensor3PairSym) -> Result<[Vec<f64>; 5]> {
    if chi.mode() != PairSym::First {
        return Err(Error::PairMode);
    }
    let n = chi.dim().n();
    let x = |i: usize, j: usize, k: usize| chi.get(i, j, k);
    // traces: p_k = chi_iik, q_k = chi_iki, r_k = chi_kii
    let p: Vec<f64> = (0..n).map(|k| (0..n).map(|i| x(i, i, k)).sum()).collect();
    let q: Vec<f64> = (0..n).map(|k| (0..n).map(|i| x(i, k, i)).sum()).collect();
    let r: Vec<f64> = (0..n).map(|k| (0..n).map(|i| x(k, i, i)).sum()).collect();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let full = |g: &dyn Fn(usize, usize, usize) -> f64| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    s += g(i, j, k);
                }
            }
        }
        s
    };
    Ok([
        vec![dot(&p, &q), dot(&p, &r)],
        vec![dot(&q, &q), dot(&r, &q), dot(&r, &r), dot(&q, &r)],
        vec![dot(&p, &p)],
        vec![
            full(&|i, j, k| x(i, j, k) * x(i, j, k)),
            full(&|i, j, k| x(j, i, k) * x(i, j, k)),
            full(&|i, j, k| x(j, i, k) * x(j, i, k)),
        ],
        vec![
            full(&|i, j, k| x(i, j, k) * x(k, j, i)),
            full(&|i, j, k| x(j, i, k) * x(k, j, i)),
            full(&|i, j, k| x(j, i, k) * x(j, k, i)),
        ],
    ])
}

/// `(I1, ..., I5)` of a curvature tensor.
pub fn chi_invariants(chi: &Tensor3PairSym) -> Result<[f64; 5]> {
    let forms = chi_invariant_forms(chi)?;
    debug_assert!(forms
        .iter()
        .all(|f| f.iter().all(|v| (v - f[0]).abs() <= 1e-12 * (1.0 + f[0].abs()))));
    Ok([forms[0][0], forms[1][0], forms[2][0], forms[3][0], forms[4][0]])
}

/// Local and nonlocal isotropic moduli.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicSge {
    pub lambda: f64,
    pub mu: f64,
    pub a: [f64; 5],
}

impl IsotropicSge {
    pub fn c(&self, dim: Dim) -> Tensor4Elastic {
        Tensor4Elastic::isotropic(self.lambda, self.mu, dim)
    }

    pub fn a_tensor(&self, dim: Dim) -> Tensor6Sge {
        Tensor6Sge::isotropic(self.a, dim)
    }

    /// `lambda/2 (tr eps)^2 + mu eps:eps + sum a_k I_k(chi)`.
    pub fn energy_invariant_form(&self, eps: &Tensor2Sym, chi: &Tensor3PairSym) -> Result<f64> {
        let inv = chi_invariants(chi)?;
        let tr = eps.trace();
        Ok(0.5 * self.lambda * tr * tr
            + self.mu * eps.ddot(eps)?
            + self.a.iter().zip(&inv).map(|(a, i)| a * i).sum::<f64>())
    }

    /// `sigma = lambda tr(eps) I + 2 mu eps`.
    pub fn sigma(&self, eps: &Tensor2Sym) -> Tensor2Sym {
        let tr = eps.trace();
        Tensor2Sym::from_fn(eps.dim(), |i, j| {
            self.lambda * tr * delta(i, j) + 2.0 * self.mu * eps.get(i, j)
        })
    }

    /// Double stress from the closed-form isotropic relation.
    pub fn tau(&self, chi: &Tensor3PairSym) -> Result<Tensor3PairSym> {
        if chi.mode() != PairSym::First {
            return Err(Error::PairMode);
        }
        let [a1, a2, a3, a4, a5] = self.a;
        let n = chi.dim().n();
        let x = |i: usize, j: usize, k: usize| chi.get(i, j, k);
        let lli = |i: usize| (0..n).map(|l| x(l, l, i)).sum::<f64>();
        let ill = |i: usize| (0..n).map(|l| x(i, l, l)).sum::<f64>();
        Ok(Tensor3PairSym::chi_from_fn(chi.dim(), |i, j, k| {
            0.5 * a1 * (lli(i) * delta(j, k) + 2.0 * ill(k) * delta(i, j) + lli(j) * delta(i, k))
                + a2 * (ill(i) * delta(j, k) + ill(j) * delta(i, k))
                + 2.0 * a3 * lli(k) * delta(i, j)
                + 2.0 * a4 * x(i, j, k)
                + a5 * (x(k, j, i) + x(k, i, j))
        }))
    }

    /// `1/2 sigma:eps + 1/2 tau:chi` with the closed-form stresses.
    pub fn energy_constitutive_form(&self, eps: &Tensor2Sym, chi: &Tensor3PairSym) -> Result<f64> {
        Ok(0.5 * self.sigma(eps).ddot(eps)? + 0.5 * self.tau(chi)?.dot(chi)?)
    }
}
