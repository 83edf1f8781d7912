use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::contain::sampled_containment;
use super::moments::{mass_properties, MassProperties};
use super::shape::ShapeSpec;

pub const GP_TOL_ANALYTIC: f64 = 1e-9;
pub const GP_TOL_MESHED: f64 = 1e-6;
/// Minimum log-log slope of `rho2/rho` against `f` for the inclusion radius
/// to count as vanishing along a family.
pub const GP3_MIN_SLOPE: f64 = 0.1;

const CONTAINMENT_SAMPLES: usize = 4096;
const CONTAINMENT_SEED: u64 = 0x5eed;

pub fn default_tol(shape: &ShapeSpec) -> f64 {
    if shape.is_meshed() {
        GP_TOL_MESHED
    } else {
        GP_TOL_ANALYTIC
    }
}

/// Geometric preconditions of one matrix/inclusion configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpReport {
    pub dim: usize,
    pub tol: f64,
    pub volume_rve: f64,
    pub volume_matrix: f64,
    pub volume_inclusion: f64,
    pub f: f64,
    pub rho_rve: f64,
    pub rho_matrix: f64,
    pub rho_inclusion: f64,
    /// Phase static moments vanish: `max |S| / (V rho)`.
    pub gp1_ok: bool,
    pub gp1_defect: f64,
    /// Phase Euler tensors are spherical: `max |dev E| / |E|`.
    pub gp2_ok: bool,
    pub gp2_defect: f64,
    /// `rho_inclusion / rho_rve`; must vanish along a dilute family.
    pub gp3_ratio: f64,
    /// `|rho^2 - (1-f) rho1^2 - f rho2^2| / rho^2`.
    pub rho_mixture_residual: f64,
}

/// Moments of RVE, matrix and inclusion together with the GP checks.
pub fn check_gp(rve: &ShapeSpec, inclusion: &ShapeSpec, tol: Option<f64>) -> Result<GpReport> {
    let dim = rve.validate()?;
    crate::tensor::check_same(dim, inclusion.validate()?)?;
    sampled_containment(inclusion, rve, CONTAINMENT_SAMPLES, CONTAINMENT_SEED)?;
    let tol = tol.unwrap_or_else(|| default_tol(rve).max(default_tol(inclusion)));

    let whole = mass_properties(rve)?;
    let incl = mass_properties(inclusion)?;
    let matrix = mass_properties(&ShapeSpec::difference(rve.clone(), inclusion.clone()))?;
    Ok(report(dim.n(), tol, &whole, &matrix, &incl))
}

fn report(
    n: usize,
    tol: f64,
    whole: &MassProperties,
    matrix: &MassProperties,
    incl: &MassProperties,
) -> GpReport {
    let rho2 = whole.mean_rho2();
    let rho = rho2.sqrt();
    let f = incl.volume / whole.volume;
    let (r1, r2) = (matrix.mean_rho2(), incl.mean_rho2());
    let gp1 = (matrix.centroid_offset().max(incl.centroid_offset())) / rho;
    let gp2 = matrix.anisotropy().max(incl.anisotropy());
    GpReport {
        dim: n,
        tol,
        volume_rve: whole.volume,
        volume_matrix: matrix.volume,
        volume_inclusion: incl.volume,
        f,
        rho_rve: rho,
        rho_matrix: r1.sqrt(),
        rho_inclusion: r2.sqrt(),
        gp1_ok: gp1 <= tol,
        gp1_defect: gp1,
        gp2_ok: gp2 <= tol,
        gp2_defect: gp2,
        gp3_ratio: (r2 / rho2).sqrt(),
        rho_mixture_residual: (rho2 - (1.0 - f) * r1 - f * r2).abs() / rho2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gp3Point {
    pub f: f64,
    pub ratio: f64,
}

/// Behaviour of `rho2/rho` along a family of inclusions in a fixed RVE.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gp3Sweep {
    pub points: Vec<Gp3Point>,
    /// Least-squares slope of `ln(rho2/rho)` against `ln f`.
    pub slope: f64,
    pub vanishing: bool,
}

pub fn gp3_sweep(rve: &ShapeSpec, family: &[ShapeSpec], tol: Option<f64>) -> Result<Gp3Sweep> {
    let mut points = Vec::with_capacity(family.len());
    for inc in family {
        let r = check_gp(rve, inc, tol)?;
        points.push(Gp3Point {
            f: r.f,
            ratio: r.gp3_ratio,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.f.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.ratio.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if points.len() < 2 || !(sxx > 0.0) {
        return Err(Error::InvalidShape(
            "inclusion family needs at least two distinct volume fractions".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(Gp3Sweep {
        points,
        slope,
        vanishing: slope >= GP3_MIN_SLOPE,
    })
}

/// Copies of `inclusion` scaled about the origin so that their volume
/// fractions in `rve` are the entries of `fs`.
pub fn homothetic_family(rve: &ShapeSpec, inclusion: &ShapeSpec, fs: &[f64]) -> Result<Vec<ShapeSpec>> {
    let n = rve.validate()?.n() as f64;
    let f0 = mass_properties(inclusion)?.volume / mass_properties(rve)?.volume;
    fs.iter()
        .map(|&f| {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::VolumeFraction(f));
            }
            Ok(inclusion.scaled((f / f0).powf(1.0 / n)))
        })
        .collect()
}
