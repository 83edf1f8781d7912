use nalgebra::DVector;

use super::{canonicalize, check_same, delta, fill_orbits, frobenius, Dim, Orbit};
use crate::error::{Error, Result};

/// General (not necessarily symmetric) second-order array, e.g. the linear
/// displacement coefficients `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2 {
    dim: Dim,
    data: Vec<f64>,
}

impl Tensor2 {
    pub fn zeros(dim: Dim) -> Self {
        Tensor2 {
            dim,
            data: vec![0.0; dim.n() * dim.n()],
        }
    }

    pub fn from_fn(dim: Dim, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = dim.n();
        let data = (0..n * n).map(|p| f(p / n, p % n)).collect();
        Tensor2 { dim, data }
    }

    pub fn from_raw(dim: Dim, raw: &[f64]) -> Result<Self> {
        let expected = dim.n() * dim.n();
        if raw.len() != expected {
            return Err(Error::ComponentCount {
                expected,
                got: raw.len(),
            });
        }
        Ok(Tensor2 {
            dim,
            data: raw.to_vec(),
        })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim.n() + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.data)
    }

    /// Symmetric part `(a + a^T) / 2`.
    pub fn sym(&self) -> Tensor2Sym {
        Tensor2Sym::from_fn(self.dim, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }
}

/// Symmetric second-order tensor (strain, stress, Euler tensor of inertia).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2Sym {
    dim: Dim,
    data: Vec<f64>,
}

fn orbit2(n: usize, p: usize) -> Orbit {
    let (i, j) = (p / n, p % n);
    Orbit::new(&[p, j * n + i])
}

impl Tensor2Sym {
    pub fn zeros(dim: Dim) -> Self {
        Tensor2Sym {
            dim,
            data: vec![0.0; dim.n() * dim.n()],
        }
    }

    pub fn identity(dim: Dim) -> Self {
        Self::from_fn(dim, delta)
    }

    /// Evaluates `f` on `i <= j` only and mirrors the result.
    pub fn from_fn(dim: Dim, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = dim.n();
        let data = fill_orbits(n * n, |p| orbit2(n, p), |p| f(p / n, p % n));
        Tensor2Sym { dim, data }
    }

    /// Validates a full row-major component array; partners may differ by at
    /// most `rel_tol` times the largest component.
    pub fn from_raw(dim: Dim, raw: &[f64], rel_tol: f64) -> Result<Self> {
        let n = dim.n();
        let data = canonicalize(raw, n, 2, |p| orbit2(n, p), rel_tol)?;
        Ok(Tensor2Sym { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim.n() + j]
    }

    /// Write-through: sets both `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.dim.n();
        self.data[i * n + j] = v;
        self.data[j * n + i] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim.n()).map(|i| self.get(i, i)).sum()
    }

    /// Full contraction `a_ij b_ij`.
    pub fn ddot(&self, other: &Tensor2Sym) -> Result<f64> {
        check_same(self.dim, other.dim)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.data)
    }

    pub fn scale(&self, s: f64) -> Self {
        Tensor2Sym {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn checked_add(&self, other: &Tensor2Sym) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Tensor2Sym {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Tensor2Sym) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Tensor2Sym {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Deviatoric part `a - (tr a / n) I`.
    pub fn deviator(&self) -> Self {
        let m = self.trace() / self.dim.n() as f64;
        Self::from_fn(self.dim, |i, j| self.get(i, j) - m * delta(i, j))
    }

    /// Coordinates in the orthonormal Mandel basis (off-diagonals scaled by sqrt 2).
    pub fn to_mandel(&self) -> DVector<f64> {
        let pairs = self.dim.mandel_pairs();
        DVector::from_iterator(
            pairs.len(),
            pairs.iter().map(|&(i, j)| {
                let s = if i == j { 1.0 } else { std::f64::consts::SQRT_2 };
                s * self.get(i, j)
            }),
        )
    }

    pub fn from_mandel(dim: Dim, v: &DVector<f64>) -> Result<Self> {
        if v.len() != dim.sym_dim() {
            return Err(Error::ComponentCount {
                expected: dim.sym_dim(),
                got: v.len(),
            });
        }
        Ok(Self::from_fn(dim, |i, j| {
            let s = if i == j { 1.0 } else { std::f64::consts::SQRT_2 };
            v[dim.mandel_index(i, j)] / s
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_through_keeps_symmetry() {
        let mut e = Tensor2Sym::zeros(Dim::Three);
        e.set(0, 2, 1.5);
        assert_eq!(e.get(2, 0), 1.5);
        assert_eq!(e.trace(), 0.0);
    }

    #[test]
    fn from_raw_names_offending_indices() {
        let raw = [1.0, 2.0, 2.5, 3.0];
        match Tensor2Sym::from_raw(Dim::Two, &raw, 1e-12) {
            Err(Error::Symmetry { at, partner, .. }) => {
                assert_eq!(at, "(1,2)");
                assert_eq!(partner, "(2,1)");
            }
            other => panic!("expected symmetry error, got {other:?}"),
        }
        assert!(Tensor2Sym::from_raw(Dim::Two, &[1.0, 2.0, 2.0, 3.0], 0.0).is_ok());
    }

    #[test]
    fn mandel_coordinates_preserve_inner_product() {
        let a = Tensor2Sym::from_fn(Dim::Three, |i, j| (i + 2 * j) as f64 - 1.0);
        let b = Tensor2Sym::from_fn(Dim::Three, |i, j| (i * j) as f64 + 0.5);
        let direct = a.ddot(&b).unwrap();
        let mandel = a.to_mandel().dot(&b.to_mandel());
        assert!((direct - mandel).abs() < 1e-13);
        let back = Tensor2Sym::from_mandel(Dim::Three, &a.to_mandel()).unwrap();
        for (x, y) in back.data().iter().zip(a.data()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn sym_part_of_general_array() {
        let a = Tensor2::from_fn(Dim::Two, |i, j| (3 * i + j) as f64);
        let s = a.sym();
        assert_eq!(s.get(0, 1), 2.0);
        assert_eq!(s.get(1, 0), 2.0);
    }
}
