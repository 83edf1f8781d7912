//! Regions of the representative volume element and their moments.
//!
//! A region is described by a [`ShapeSpec`]. [`mass_properties`] returns its
//! volume, static moment `S_i = int x_i` and Euler tensor of inertia
//! `E_ij = int x_i x_j`, all taken about the coordinate origin. [`check_gp`]
//! tests the geometric preconditions of the homogenization result on a
//! matrix/inclusion pair.

mod contain;
mod gp;
mod moments;
mod shape;

pub use contain::{contains, sample_inside, sampled_containment, BoundingBox};
pub use gp::{
    check_gp, default_tol, gp3_sweep, homothetic_family, Gp3Point, Gp3Sweep, GpReport, GP3_MIN_SLOPE,
    GP_TOL_ANALYTIC, GP_TOL_MESHED,
};
pub use moments::{mass_properties, MassProperties};
pub use shape::{ShapeSpec, SignedShape};
