use nalgebra::{DMatrix, Matrix2, Vector2};

use super::{
    canonicalize, check_same, delta, fill_orbits, frobenius, Dim, Orbit, SymmetricSubspace, Tensor2Sym,
};
use crate::error::{Error, Result};

/// Fourth-order elasticity tensor with minor symmetries `C_ijhk = C_jihk = C_ijkh`
/// and major symmetry `C_ijhk = C_hkij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4Elastic {
    dim: Dim,
    data: Vec<f64>,
}

fn orbit4(n: usize, p: usize) -> Orbit {
    let n2 = n * n;
    let (i, j, h, k) = (p / (n2 * n), (p / n2) % n, (p / n) % n, p % n);
    let f = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    Orbit::new(&[
        f(i, j, h, k),
        f(j, i, h, k),
        f(i, j, k, h),
        f(j, i, k, h),
        f(h, k, i, j),
        f(k, h, i, j),
        f(h, k, j, i),
        f(k, h, j, i),
    ])
}

impl Tensor4Elastic {
    pub fn zeros(dim: Dim) -> Self {
        Tensor4Elastic {
            dim,
            data: vec![0.0; dim.n().pow(4)],
        }
    }

    /// `f` is evaluated once per symmetry orbit; the result has exact symmetry.
    pub fn from_fn(dim: Dim, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let n = dim.n();
        let data = fill_orbits(
            n.pow(4),
            |p| orbit4(n, p),
            |p| {
                let n2 = n * n;
                f(p / (n2 * n), (p / n2) % n, (p / n) % n, p % n)
            },
        );
        Tensor4Elastic { dim, data }
    }

    /// Validates a full `(i,j,h,k)` row-major array against all elastic symmetries.
    pub fn from_raw(dim: Dim, raw: &[f64], rel_tol: f64) -> Result<Self> {
        let n = dim.n();
        let data = canonicalize(raw, n, 4, |p| orbit4(n, p), rel_tol)?;
        Ok(Tensor4Elastic { dim, data })
    }

    /// `lambda d_ij d_hk + mu (d_ih d_jk + d_ik d_jh)`.
    pub fn isotropic(lambda: f64, mu: f64, dim: Dim) -> Self {
        Self::from_fn(dim, |i, j, h, k| {
            lambda * delta(i, j) * delta(h, k) + mu * (delta(i, h) * delta(j, k) + delta(i, k) * delta(j, h))
        })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, h: usize, k: usize) -> f64 {
        let n = self.dim.n();
        self.data[((i * n + j) * n + h) * n + k]
    }

    /// Write-through to all eight symmetric positions.
    pub fn set(&mut self, i: usize, j: usize, h: usize, k: usize, v: f64) {
        let n = self.dim.n();
        for &q in orbit4(n, ((i * n + j) * n + h) * n + k).members() {
            self.data[q] = v;
        }
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn scale(&self, s: f64) -> Self {
        Tensor4Elastic {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn checked_add(&self, other: &Tensor4Elastic) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Tensor4Elastic {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Tensor4Elastic) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Tensor4Elastic {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `sigma_ij = C_ijhk eps_hk`.
    pub fn apply(&self, eps: &Tensor2Sym) -> Result<Tensor2Sym> {
        check_same(self.dim, eps.dim())?;
        let n = self.dim.n();
        Ok(Tensor2Sym::from_fn(self.dim, |i, j| {
            let mut s = 0.0;
            for h in 0..n {
                for k in 0..n {
                    s += self.get(i, j, h, k) * eps.get(h, k);
                }
            }
            s
        }))
    }

    /// Quadratic form `eps_ij C_ijhk eps_hk`.
    pub fn quad(&self, eps: &Tensor2Sym) -> Result<f64> {
        self.apply(eps)?.ddot(eps)
    }

    /// Inverse on the space of symmetric second-order tensors, i.e. the tensor
    /// `S` with `S : (C : eps) = eps` for every symmetric `eps`.
    pub fn inverse_on_sym(&self) -> Result<Self> {
        let m = self.subspace_matrix();
        let inv = super::subspace::spd_inverse(m, self.norm())?;
        Self::from_subspace_matrix(self.dim, &inv)
    }

    /// Rebuilds a tensor from its matrix on the orthonormal Mandel basis.
    pub fn from_subspace_matrix(dim: Dim, m: &DMatrix<f64>) -> Result<Self> {
        let s = dim.sym_dim();
        if m.nrows() != s || m.ncols() != s {
            return Err(Error::ComponentCount {
                expected: s * s,
                got: m.len(),
            });
        }
        Ok(Self::from_fn(dim, |i, j, h, k| {
            let (a, b) = (dim.mandel_index(i, j), dim.mandel_index(h, k));
            0.5 * (m[(a, b)] + m[(b, a)]) / (mandel_weight(i, j) * mandel_weight(h, k))
        }))
    }

    /// Least-squares fit onto the isotropic family. Returns `(lambda, mu, r)`
    /// where `r` is the Frobenius norm of the residual divided by the norm of
    /// the tensor (zero for the zero tensor).
    pub fn isotropic_fit(&self) -> (f64, f64, f64) {
        let p = Self::isotropic(1.0, 0.0, self.dim);
        let q = Self::isotropic(0.0, 1.0, self.dim);
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let g = Matrix2::new(
            dot(&p.data, &p.data),
            dot(&p.data, &q.data),
            dot(&q.data, &p.data),
            dot(&q.data, &q.data),
        );
        let rhs = Vector2::new(dot(&p.data, &self.data), dot(&q.data, &self.data));
        let sol = g.lu().solve(&rhs).expect("isotropic basis is independent");
        let (lambda, mu) = (sol[0], sol[1]);
        let fit = Self::isotropic(lambda, mu, self.dim);
        let norm = self.norm();
        let res = frobenius(
            &self
                .data
                .iter()
                .zip(&fit.data)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        (lambda, mu, if norm > 0.0 { res / norm } else { 0.0 })
    }
}

#[inline]
pub(crate) fn mandel_weight(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        std::f64::consts::SQRT_2
    }
}

impl SymmetricSubspace for Tensor4Elastic {
    fn dim(&self) -> Dim {
        self.dim
    }

    fn norm(&self) -> f64 {
        frobenius(&self.data)
    }

    fn subspace_matrix(&self) -> DMatrix<f64> {
        let pairs = self.dim.mandel_pairs();
        DMatrix::from_fn(pairs.len(), pairs.len(), |a, b| {
            let (i, j) = pairs[a];
            let (h, k) = pairs[b];
            mandel_weight(i, j) * mandel_weight(h, k) * self.get(i, j, h, k)
        })
    }
}
