//! Effective Mindlin second-gradient elasticity of dilute two-phase
//! Cauchy-elastic composites.
//!
//! Given the matrix stiffness `C1`, the first-order effective stiffness
//! `C_eq = C1 + f C~`, the inclusion volume fraction `f` and the inertia radius
//! `rho` of the representative volume element, [`homog::effective_a`] returns
//! the sixth-order nonlocal tensor
//!
//! ```text
//! A_ijhlmn = -f rho^2 / 4 (C~_ihln d_jm + C~_ihmn d_jl + C~_jhln d_im + C~_jhmn d_il)
//! ```
//!
//! which makes the strain energy of the heterogeneous cell and of the
//! equivalent second-gradient solid coincide, at first order in `f`, under any
//! quadratic boundary displacement. The [`energy`] module evaluates both
//! energies and their bounds so this can be checked numerically, and
//! [`geometry`] computes the moments of inertia the result depends on.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod homog;
pub mod sampling;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{
    BetaField, Definiteness, Dim, PairSym, SymmetricSubspace, Tensor2, Tensor2Sym, Tensor3PairSym,
    Tensor4Elastic, Tensor6Sge,
};

/// Seed used when none is given; fixed so published reports are reproducible.
pub const DEFAULT_SEED: u64 = 20_260_101;
