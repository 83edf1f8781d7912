//! Energies under quadratic boundary data and the gap certificate.
//!
//! Under `u_i = beta_ijk x_j x_k` the heterogeneous RVE and the equivalent
//! second-gradient solid store energies that agree at first order in `f`
//! exactly when `A_eq` is the homogenized nonlocal tensor. [`mismatch`]
//! evaluates both sides together with kinematic/static bounds; [`certify`]
//! repeats it over seeded admissible fields and [`fsweep`] tracks the
//! dropped higher-order terms as the inclusion shrinks.

mod certify;
mod fields;
mod gap;

pub use certify::{
    certify, fsweep, homothetic_ladder, Certificate, CertifyOptions, Sweep, SweepPoint, SweepSetup,
    CERTIFY_TOL,
};
pub use fields::{
    chi_from_beta, chi_invariant_forms, chi_invariants, fields_from_quadratic, sge_energy_density, Fields,
    IsotropicSge, QuadraticBC,
};
pub use gap::{
    a_beta_beta, annihilation_contraction, bounds_available, c_beta_beta, galpha_zero_check, mismatch,
    rve_bounds, rve_energy_beta, sge_bounds, sge_energy_beta, Annihilation, Bounds, ConjugateRoute,
    EnergyReport, MismatchOptions, Normalized, SgeBounds, NOTE_CONJUGATE_IDENTITY, NOTE_C_HAT,
    NOTE_NO_C_EQ_INVERSE, NOTE_RVE_ORDER, NOTE_SGE_ORDER, SANDWICH_TOL,
};
