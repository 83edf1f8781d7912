//! Seeded random instances used by sample suites and sweeps.
//!
//! Each task draws from its own ChaCha stream, `rng(seed, stream)`, so results
//! are reproducible and independent of execution order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::{
    Dim, PairSym, SymmetricSubspace, Tensor2, Tensor2Sym, Tensor3PairSym, Tensor4Elastic, Tensor6Sge,
};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn normal_matrix<R: Rng + ?Sized>(rng: &mut R, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| normal(rng))
}

fn sym_matrix<R: Rng + ?Sized>(rng: &mut R, s: usize) -> DMatrix<f64> {
    let g = normal_matrix(rng, s, s);
    (&g + g.transpose()) * 0.5
}

/// Positive definite elasticity tensor whose subspace spectrum lies in
/// `[min_eig, min_eig + O(1)]`.
pub fn spd_c<R: Rng + ?Sized>(rng: &mut R, dim: Dim, min_eig: f64) -> Tensor4Elastic {
    let s = dim.sym_dim();
    let g = normal_matrix(rng, s, s);
    let m = &g * g.transpose() / s as f64 + DMatrix::identity(s, s) * min_eig;
    Tensor4Elastic::from_subspace_matrix(dim, &m).expect("square matrix of the right size")
}

/// Elasticity-symmetric tensor with an arbitrary (indefinite) spectrum.
pub fn sym_c<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor4Elastic {
    let m = sym_matrix(rng, dim.sym_dim());
    Tensor4Elastic::from_subspace_matrix(dim, &m).expect("square matrix of the right size")
}

/// Elasticity-symmetric tensor with a spectrum drawn as one of: negative
/// definite, positive definite, indefinite. Used to exercise both sides of
/// definiteness equivalences.
pub fn mixed_c<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor4Elastic {
    match rng.random_range(0..3) {
        0 => spd_c(rng, dim, 0.05).scale(-1.0),
        1 => spd_c(rng, dim, 0.05),
        _ => sym_c(rng, dim),
    }
}

/// Random elasticity tensor scaled so its subspace spectral radius is `radius`.
pub fn c_with_radius<R: Rng + ?Sized>(rng: &mut R, dim: Dim, radius: f64) -> Tensor4Elastic {
    let c = mixed_c(rng, dim);
    let ev = c.eigenvalues_on_sym();
    let r = ev.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    c.scale(radius / r)
}

pub fn spd_a<R: Rng + ?Sized>(rng: &mut R, dim: Dim, min_eig: f64) -> Tensor6Sge {
    let s = dim.pair_sym_dim();
    let g = normal_matrix(rng, s, s);
    let m = &g * g.transpose() / s as f64 + DMatrix::identity(s, s) * min_eig;
    Tensor6Sge::from_subspace_matrix(dim, &m).expect("square matrix of the right size")
}

pub fn sym_a<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor6Sge {
    let m = sym_matrix(rng, dim.pair_sym_dim());
    Tensor6Sge::from_subspace_matrix(dim, &m).expect("square matrix of the right size")
}

pub fn tensor2<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor2 {
    Tensor2::from_fn(dim, |_, _| normal(rng))
}

pub fn sym2<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor2Sym {
    Tensor2Sym::from_fn(dim, |_, _| normal(rng))
}

pub fn chi<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor3PairSym {
    Tensor3PairSym::from_fn(dim, PairSym::First, |_, _, _| normal(rng))
}

/// Unconstrained beta (only the symmetry in its last pair).
pub fn beta<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Tensor3PairSym {
    Tensor3PairSym::from_fn(dim, PairSym::Last, |_, _, _| normal(rng))
}

pub fn point<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> Vec<f64> {
    (0..dim.n()).map(|_| normal(rng)).collect()
}
