use nalgebra::DMatrix;

use super::tensor4::mandel_weight;
use super::{
    canonicalize, check_same, delta, fill_orbits, flatten, frobenius, Dim, Orbit, PairSym, SymmetricSubspace,
    Tensor3PairSym,
};
use crate::error::{Error, Result};

/// Sixth-order nonlocal stiffness `A_ijklmn`, symmetric in `(i,j)`, in `(l,m)`
/// and under the swap `(ijk) <-> (lmn)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor6Sge {
    dim: Dim,
    data: Vec<f64>,
}

#[inline]
fn flat6(n: usize, idx: [usize; 6]) -> usize {
    flatten(&idx, n)
}

#[inline]
fn split6(n: usize, mut p: usize) -> [usize; 6] {
    let mut idx = [0; 6];
    for slot in idx.iter_mut().rev() {
        *slot = p % n;
        p /= n;
    }
    idx
}

fn orbit6(n: usize, p: usize) -> Orbit {
    let [i, j, k, l, m, q] = split6(n, p);
    Orbit::new(&[
        flat6(n, [i, j, k, l, m, q]),
        flat6(n, [j, i, k, l, m, q]),
        flat6(n, [i, j, k, m, l, q]),
        flat6(n, [j, i, k, m, l, q]),
        flat6(n, [l, m, q, i, j, k]),
        flat6(n, [m, l, q, i, j, k]),
        flat6(n, [l, m, q, j, i, k]),
        flat6(n, [m, l, q, j, i, k]),
    ])
}

impl Tensor6Sge {
    pub fn zeros(dim: Dim) -> Self {
        Tensor6Sge {
            dim,
            data: vec![0.0; dim.n().pow(6)],
        }
    }

    /// `f` is evaluated once per symmetry orbit; the result has exact symmetry.
    pub fn from_fn(dim: Dim, mut f: impl FnMut([usize; 6]) -> f64) -> Self {
        let n = dim.n();
        let data = fill_orbits(n.pow(6), |p| orbit6(n, p), |p| f(split6(n, p)));
        Tensor6Sge { dim, data }
    }

    /// Validates a full `(i,j,k,l,m,n)` row-major array against all symmetries.
    pub fn from_raw(dim: Dim, raw: &[f64], rel_tol: f64) -> Result<Self> {
        let n = dim.n();
        let data = canonicalize(raw, n, 6, |p| orbit6(n, p), rel_tol)?;
        Ok(Tensor6Sge { dim, data })
    }

    /// Five-parameter isotropic tensor (Mindlin's form).
    pub fn isotropic(a: [f64; 5], dim: Dim) -> Self {
        let [a1, a2, a3, a4, a5] = a;
        let d = delta;
        Self::from_fn(dim, |[i, j, h, l, m, n]| {
            0.5 * a1
                * (d(i, j) * (d(h, l) * d(m, n) + d(h, m) * d(l, n))
                    + d(l, m) * (d(i, n) * d(j, h) + d(i, h) * d(j, n)))
                + 0.5
                    * a2
                    * (d(i, h) * (d(j, l) * d(m, n) + d(j, m) * d(l, n))
                        + d(j, h) * (d(i, l) * d(m, n) + d(i, m) * d(l, n)))
                + 2.0 * a3 * d(i, j) * d(h, n) * d(l, m)
                + a4 * (d(i, l) * d(j, m) + d(i, m) * d(j, l)) * d(h, n)
                + 0.5
                    * a5
                    * (d(i, n) * (d(j, l) * d(h, m) + d(j, m) * d(h, l))
                        + d(j, n) * (d(i, l) * d(h, m) + d(i, m) * d(h, l)))
        })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize, m: usize, n: usize) -> f64 {
        self.data[flat6(self.dim.n(), [i, j, k, l, m, n])]
    }

    /// Write-through to all symmetric positions.
    pub fn set(&mut self, idx: [usize; 6], v: f64) {
        let n = self.dim.n();
        for &q in orbit6(n, flat6(n, idx)).members() {
            self.data[q] = v;
        }
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn scale(&self, s: f64) -> Self {
        Tensor6Sge {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn checked_add(&self, other: &Tensor6Sge) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Tensor6Sge {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Tensor6Sge) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Tensor6Sge {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `tau_ijk = A_ijklmn chi_lmn`; `chi` must be symmetric in its first pair.
    pub fn apply(&self, chi: &Tensor3PairSym) -> Result<Tensor3PairSym> {
        check_same(self.dim, chi.dim())?;
        if chi.mode() != PairSym::First {
            return Err(Error::PairMode);
        }
        let n = self.dim.n();
        let n3 = n * n * n;
        let c = chi.data();
        Ok(Tensor3PairSym::chi_from_fn(self.dim, |i, j, k| {
            let row = ((i * n + j) * n + k) * n3;
            self.data[row..row + n3].iter().zip(c).map(|(a, x)| a * x).sum()
        }))
    }

    /// Quadratic form `chi_ijk A_ijklmn chi_lmn`.
    pub fn quad(&self, chi: &Tensor3PairSym) -> Result<f64> {
        self.apply(chi)?.dot(chi)
    }

    /// Inverse restricted to third-order tensors symmetric in the first pair.
    pub fn inverse_on_sym(&self) -> Result<Self> {
        let m = self.subspace_matrix();
        let inv = super::subspace::spd_inverse(m, self.norm())?;
        Self::from_subspace_matrix(self.dim, &inv)
    }

    pub fn from_subspace_matrix(dim: Dim, m: &DMatrix<f64>) -> Result<Self> {
        let s = dim.pair_sym_dim();
        if m.nrows() != s || m.ncols() != s {
            return Err(Error::ComponentCount {
                expected: s * s,
                got: m.len(),
            });
        }
        let n = dim.n();
        Ok(Self::from_fn(dim, |[i, j, k, l, mm, q]| {
            let a = dim.mandel_index(i, j) * n + k;
            let b = dim.mandel_index(l, mm) * n + q;
            0.5 * (m[(a, b)] + m[(b, a)]) / (mandel_weight(i, j) * mandel_weight(l, mm))
        }))
    }
}

impl SymmetricSubspace for Tensor6Sge {
    fn dim(&self) -> Dim {
        self.dim
    }

    fn norm(&self) -> f64 {
        frobenius(&self.data)
    }

    fn subspace_matrix(&self) -> DMatrix<f64> {
        let n = self.dim.n();
        let pairs = self.dim.mandel_pairs();
        let s = self.dim.pair_sym_dim();
        DMatrix::from_fn(s, s, |a, b| {
            let (i, j) = pairs[a / n];
            let (l, m) = pairs[b / n];
            mandel_weight(i, j) * mandel_weight(l, m) * self.get(i, j, a % n, l, m, b % n)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a4_term_entry() {
        let a = Tensor6Sge::isotropic([0.0, 0.0, 0.0, 1.0, 0.0], Dim::Three);
        assert_eq!(a.get(0, 1, 2, 0, 1, 2), 1.0);
        assert!(Tensor6Sge::isotropic([0.0; 5], Dim::Three)
            .data()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn a4_term_doubles_curvature() {
        let a = Tensor6Sge::isotropic([0.0, 0.0, 0.0, 1.0, 0.0], Dim::Three);
        let chi = Tensor3PairSym::chi_from_fn(Dim::Three, |i, j, k| (i + j) as f64 - 0.5 * k as f64);
        let tau = a.apply(&chi).unwrap();
        for (t, c) in tau.data().iter().zip(chi.data()) {
            assert!((t - 2.0 * c).abs() < 1e-14);
        }
    }

    #[test]
    fn apply_needs_first_pair_mode() {
        let a = Tensor6Sge::zeros(Dim::Two);
        let beta = Tensor3PairSym::zeros(Dim::Two, PairSym::Last);
        assert_eq!(a.apply(&beta), Err(Error::PairMode));
    }

    #[test]
    fn identity_on_chi_subspace_inverts_to_itself() {
        for dim in [Dim::Two, Dim::Three] {
            let id = DMatrix::identity(dim.pair_sym_dim(), dim.pair_sym_dim());
            let a = Tensor6Sge::from_subspace_matrix(dim, &id).unwrap();
            let inv = a.inverse_on_sym().unwrap();
            for (x, y) in inv.data().iter().zip(a.data()) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }
}
