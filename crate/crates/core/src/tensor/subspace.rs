//! Matrix representation of elastic operators on their symmetric subspaces.
//!
//! Symmetric second-order tensors use the orthonormal Mandel basis
//! (`e_ii`, `(e_ij + e_ji)/sqrt 2`); third-order tensors symmetric in their
//! first pair use the same basis on that pair tensored with `e_k`. In these
//! bases the restricted operators are represented by symmetric matrices, so
//! their spectra are real.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::Dim;
use crate::error::{Error, Result};

/// Relative threshold (times the Frobenius norm of the tensor) below which a
/// smallest eigenvalue is not trusted to be strictly positive.
pub const PD_REL_TOL: f64 = 1e-10;

/// Outcome of a positive-definiteness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    /// Smallest eigenvalue above the tolerance.
    Positive,
    /// Smallest eigenvalue within the tolerance band around zero.
    Borderline,
    /// Smallest eigenvalue below minus the tolerance.
    NotPositive,
}

impl Definiteness {
    pub fn classify(eig_min: f64, norm: f64, rel_tol: f64) -> Self {
        let tol = rel_tol * norm;
        if eig_min > tol {
            Definiteness::Positive
        } else if eig_min < -tol {
            Definiteness::NotPositive
        } else {
            Definiteness::Borderline
        }
    }

    pub fn is_positive(self) -> bool {
        self == Definiteness::Positive
    }
}

/// Operators analysed on a symmetric subspace through an orthonormal basis.
pub trait SymmetricSubspace {
    fn dim(&self) -> Dim;

    /// Frobenius norm over all stored components.
    fn norm(&self) -> f64;

    /// Symmetric matrix of the operator on the orthonormal subspace basis.
    fn subspace_matrix(&self) -> DMatrix<f64>;

    fn eigenvalues_on_sym(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.subspace_matrix())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn eig_min_on_sym(&self) -> f64 {
        SymmetricEigen::new(self.subspace_matrix()).eigenvalues.min()
    }

    fn definiteness(&self) -> Definiteness {
        Definiteness::classify(self.eig_min_on_sym(), self.norm(), PD_REL_TOL)
    }
}

/// Smallest eigenvalue of `t` restricted to its symmetric subspace.
pub fn eig_min_on_sym<T: SymmetricSubspace + ?Sized>(t: &T) -> f64 {
    t.eig_min_on_sym()
}

pub(crate) fn spd_inverse(m: DMatrix<f64>, norm: f64) -> Result<DMatrix<f64>> {
    let eig_min = SymmetricEigen::new(m.clone()).eigenvalues.min();
    match Definiteness::classify(eig_min, norm, PD_REL_TOL) {
        Definiteness::Positive => {}
        Definiteness::Borderline => return Err(Error::Singular { eig_min }),
        Definiteness::NotPositive => return Err(Error::Indefinite { eig_min }),
    }
    let chol = Cholesky::new(m).ok_or(Error::Indefinite { eig_min })?;
    let inv = chol.inverse();
    Ok((&inv + inv.transpose()) * 0.5)
}
