use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{canonicalize, check_same, fill_orbits, frobenius, Dim, Orbit};
use crate::error::{Error, Result};

/// Which index pair of a third-order tensor is symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSym {
    /// `t_ijk = t_jik`: curvature `chi` and double stress `tau`.
    First,
    /// `t_ijk = t_ikj`: quadratic displacement coefficients `beta`.
    Last,
}

/// Third-order tensor symmetric in one index pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3PairSym {
    dim: Dim,
    mode: PairSym,
    data: Vec<f64>,
}

/// Quadratic displacement generator `u_i = beta_ijk x_j x_k`, stored with
/// [`PairSym::Last`].
pub type BetaField = Tensor3PairSym;

fn orbit3(n: usize, mode: PairSym, p: usize) -> Orbit {
    let (i, j, k) = (p / (n * n), (p / n) % n, p % n);
    let partner = match mode {
        PairSym::First => (j * n + i) * n + k,
        PairSym::Last => (i * n + k) * n + j,
    };
    Orbit::new(&[p, partner])
}

impl Tensor3PairSym {
    pub fn zeros(dim: Dim, mode: PairSym) -> Self {
        let n = dim.n();
        Tensor3PairSym {
            dim,
            mode,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_fn(dim: Dim, mode: PairSym, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let n = dim.n();
        let data = fill_orbits(
            n * n * n,
            |p| orbit3(n, mode, p),
            |p| f(p / (n * n), (p / n) % n, p % n),
        );
        Tensor3PairSym { dim, mode, data }
    }

    pub fn chi_from_fn(dim: Dim, f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        Self::from_fn(dim, PairSym::First, f)
    }

    pub fn beta_from_fn(dim: Dim, f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        Self::from_fn(dim, PairSym::Last, f)
    }

    pub fn from_raw(dim: Dim, mode: PairSym, raw: &[f64], rel_tol: f64) -> Result<Self> {
        let n = dim.n();
        let data = canonicalize(raw, n, 3, |p| orbit3(n, mode, p), rel_tol)?;
        Ok(Tensor3PairSym { dim, mode, data })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn mode(&self) -> PairSym {
        self.mode
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim.n();
        self.data[(i * n + j) * n + k]
    }

    /// Write-through: also sets the symmetric partner.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.dim.n();
        let p = (i * n + j) * n + k;
        for &q in orbit3(n, self.mode, p).members() {
            self.data[q] = v;
        }
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.data)
    }

    /// Full contraction `a_ijk b_ijk` over all components.
    pub fn dot(&self, other: &Tensor3PairSym) -> Result<f64> {
        check_same(self.dim, other.dim)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&self, s: f64) -> Self {
        Tensor3PairSym {
            dim: self.dim,
            mode: self.mode,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn checked_add(&self, other: &Tensor3PairSym) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        if self.mode != other.mode {
            return Err(Error::PairMode);
        }
        Ok(Tensor3PairSym {
            dim: self.dim,
            mode: self.mode,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Coordinates in the orthonormal basis of the pair-symmetric subspace.
    /// Coordinate `pair * n + free` carries the pair `(a, b)` in Mandel order
    /// and the remaining free index.
    pub fn to_coords(&self) -> DVector<f64> {
        let n = self.dim.n();
        let pairs = self.dim.mandel_pairs();
        let mut v = DVector::zeros(self.dim.pair_sym_dim());
        for (a, &(p, q)) in pairs.iter().enumerate() {
            let s = if p == q { 1.0 } else { std::f64::consts::SQRT_2 };
            for f in 0..n {
                let c = match self.mode {
                    PairSym::First => self.get(p, q, f),
                    PairSym::Last => self.get(f, p, q),
                };
                v[a * n + f] = s * c;
            }
        }
        v
    }

    pub fn from_coords(dim: Dim, mode: PairSym, v: &DVector<f64>) -> Result<Self> {
        if v.len() != dim.pair_sym_dim() {
            return Err(Error::ComponentCount {
                expected: dim.pair_sym_dim(),
                got: v.len(),
            });
        }
        let n = dim.n();
        Ok(Self::from_fn(dim, mode, |i, j, k| {
            let (p, q, f) = match mode {
                PairSym::First => (i, j, k),
                PairSym::Last => (j, k, i),
            };
            let s = if p == q { 1.0 } else { std::f64::consts::SQRT_2 };
            v[dim.mandel_index(p, q) * n + f] / s
        }))
    }
}
