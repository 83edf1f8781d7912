//! Input file formats. See `schemas/` for the documented JSON layouts.

use serde::{Deserialize, Serialize};

use mindlin_core::geometry::{check_gp, GpReport, ShapeSpec};
use mindlin_core::homog::HomogenizationProblem;
use mindlin_core::{Dim, SymmetricSubspace, Tensor4Elastic, Tensor6Sge};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// Relative tolerance for symmetric partners of loaded components. Partners
/// that agree within it are averaged; others are rejected.
pub const SYM_TOL: f64 = 1e-12;

/// Volume fractions above this get a dilute-regime warning.
pub const DILUTE_WARN_F: f64 = 0.1;

/// Two volume fractions closer than this (relative) are considered equal.
const F_MATCH_TOL: f64 = 1e-9;

pub type Nested4 = Vec<Vec<Vec<Vec<f64>>>>;
pub type Nested6 = Vec<Vec<Vec<Vec<Vec<Vec<f64>>>>>>;

/// A fourth-order elastic tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TensorSpec {
    Isotropic {
        lambda: f64,
        mu: f64,
    },
    /// Nested arrays in index order `(i, j, h, k)`.
    Components(Nested4),
}

/// A sixth-order second-gradient tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SgeTensorSpec {
    IsotropicA([f64; 5]),
    /// Nested arrays in index order `(i, j, k, l, m, n)`.
    Components(Nested6),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Certification threshold on `mismatch_rel`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sym_tol: Option<f64>,
    /// Tolerance of the geometric checks; defaults by shape type.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gp_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// RVE volume used to scale energies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Auxiliary stiffness of the bound construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hat: Option<TensorSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub rve: ShapeSpec,
    pub inclusion: ShapeSpec,
    /// Shrinking inclusions for f-sweeps; homothetic copies otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion_family: Option<Vec<ShapeSpec>>,
}

/// Input of `homogenize` and `verify-energy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub dim: usize,
    pub matrix: TensorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_eq: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_tilde: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2_inclusion: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryBlock>,
    /// Externally supplied nonlocal tensor to verify instead of the computed one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_eq: Option<SgeTensorSpec>,
    #[serde(default)]
    pub options: Options,
}

/// Input of `geometry`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapesFile {
    pub version: u32,
    pub rve: ShapeSpec,
    pub inclusion: ShapeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion_family: Option<Vec<ShapeSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Input of `check-pd`: exactly one of `c`, `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub version: u32,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<SgeTensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sym_tol: Option<f64>,
}

/// Values that may come from the command line and override the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

trait Nested {
    fn flatten_into(&self, n: usize, path: &mut Vec<usize>, out: &mut Vec<f64>) -> Result<(), String>;
}

impl Nested for f64 {
    fn flatten_into(&self, _: usize, path: &mut Vec<usize>, out: &mut Vec<f64>) -> Result<(), String> {
        if !self.is_finite() {
            return Err(format!("non-finite component at {}", fmt_path(path)));
        }
        out.push(*self);
        Ok(())
    }
}

impl<T: Nested> Nested for Vec<T> {
    fn flatten_into(&self, n: usize, path: &mut Vec<usize>, out: &mut Vec<f64>) -> Result<(), String> {
        if self.len() != n {
            return Err(format!(
                "expected {n} entries at {}, got {}",
                fmt_path(path),
                self.len()
            ));
        }
        for (k, v) in self.iter().enumerate() {
            path.push(k);
            v.flatten_into(n, path, out)?;
            path.pop();
        }
        Ok(())
    }
}

fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        return "top level".into();
    }
    let parts: Vec<String> = path.iter().map(|i| (i + 1).to_string()).collect();
    format!("index ({})", parts.join(","))
}

fn flatten<T: Nested>(nested: &T, n: usize, what: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    nested
        .flatten_into(n, &mut Vec::new(), &mut out)
        .map_err(|e| CliError::Schema(format!("{what}: {e}")))?;
    Ok(out)
}

fn rows(data: &[f64], n: usize) -> Vec<Vec<f64>> {
    data.chunks(n).map(<[f64]>::to_vec).collect()
}

fn group<T: Clone>(items: Vec<T>, n: usize) -> Vec<Vec<T>> {
    items.chunks(n).map(<[T]>::to_vec).collect()
}

/// Full components in index order, for output.
pub fn nest4(t: &Tensor4Elastic) -> Nested4 {
    let n = t.dim().n();
    group(group(rows(t.data(), n), n), n)
}

pub fn nest6(t: &Tensor6Sge) -> Nested6 {
    let n = t.dim().n();
    group(group(group(group(rows(t.data(), n), n), n), n), n)
}

impl TensorSpec {
    pub fn to_tensor(&self, dim: Dim, sym_tol: f64, what: &str) -> CliResult<Tensor4Elastic> {
        match self {
            TensorSpec::Isotropic { lambda, mu } => {
                if !lambda.is_finite() || !mu.is_finite() {
                    return Err(CliError::Schema(format!("{what}: non-finite Lame constant")));
                }
                Ok(Tensor4Elastic::isotropic(*lambda, *mu, dim))
            }
            TensorSpec::Components(c) => {
                let raw = flatten(c, dim.n(), what)?;
                Tensor4Elastic::from_raw(dim, &raw, sym_tol).map_err(|e| CliError::from_core(what, e))
            }
        }
    }

    pub fn lame(&self) -> Option<(f64, f64)> {
        match *self {
            TensorSpec::Isotropic { lambda, mu } => Some((lambda, mu)),
            TensorSpec::Components(_) => None,
        }
    }
}

impl SgeTensorSpec {
    pub fn to_tensor(&self, dim: Dim, sym_tol: f64, what: &str) -> CliResult<Tensor6Sge> {
        match self {
            SgeTensorSpec::IsotropicA(a) => {
                if a.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::Schema(format!("{what}: non-finite coefficient")));
                }
                Ok(Tensor6Sge::isotropic(*a, dim))
            }
            SgeTensorSpec::Components(c) => {
                let raw = flatten(c, dim.n(), what)?;
                Tensor6Sge::from_raw(dim, &raw, sym_tol).map_err(|e| CliError::from_core(what, e))
            }
        }
    }
}

pub fn check_version(v: u32) -> CliResult<()> {
    if v != FORMAT_VERSION {
        return Err(CliError::Schema(format!(
            "unsupported version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

pub fn parse_dim(n: usize) -> CliResult<Dim> {
    Dim::new(n).map_err(|e| CliError::Schema(format!("dim: {e}")))
}

fn exactly_one<'a, T>(a: &'a Option<T>, b: &'a Option<T>, names: (&str, &str)) -> CliResult<(&'a T, bool)> {
    match (a, b) {
        (Some(x), None) => Ok((x, true)),
        (None, Some(y)) => Ok((y, false)),
        (Some(_), Some(_)) => Err(CliError::Schema(format!(
            "give only one of `{}` and `{}`",
            names.0, names.1
        ))),
        (None, None) => Err(CliError::Schema(format!(
            "one of `{}` or `{}` is required",
            names.0, names.1
        ))),
    }
}

fn positive(v: f64, what: &str) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Schema(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

/// Run settings after applying defaults and command-line overrides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub omega: f64,
}

/// A validated problem ready for the pipelines.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub problem: HomogenizationProblem,
    pub gp: Option<GpReport>,
    pub rho2_inclusion: Option<f64>,
    pub a_external: Option<Tensor6Sge>,
    pub c_hat: Option<Tensor4Elastic>,
    pub settings: Settings,
    pub warnings: Vec<String>,
}

impl ProblemFile {
    pub fn resolve(&self, ov: Overrides) -> CliResult<Resolved> {
        check_version(self.version)?;
        let dim = parse_dim(self.dim)?;
        let o = &self.options;
        let sym_tol = positive(o.sym_tol.unwrap_or(SYM_TOL), "options.sym_tol")?;
        let settings = Settings {
            tol: positive(
                ov.tol.or(o.tol).unwrap_or(mindlin_core::energy::CERTIFY_TOL),
                "tol",
            )?,
            seed: ov.seed.or(o.seed).unwrap_or(mindlin_core::DEFAULT_SEED),
            samples: ov.samples.or(o.samples).unwrap_or(20),
            omega: positive(o.omega.unwrap_or(1.0), "options.omega")?,
        };
        if settings.samples == 0 {
            return Err(CliError::Schema("samples must be at least 1".into()));
        }
        let mut warnings = Vec::new();

        let c1 = self.matrix.to_tensor(dim, sym_tol, "matrix")?;
        let (eff, is_eq) = exactly_one(&self.c_eq, &self.c_tilde, ("c_eq", "c_tilde"))?;
        let eff_t = eff.to_tensor(dim, sym_tol, if is_eq { "c_eq" } else { "c_tilde" })?;

        let (f, rho2, rho2_inclusion, gp) = match (&self.rho2, &self.geometry) {
            (Some(_), Some(_)) => {
                return Err(CliError::Schema("give only one of `rho2` and `geometry`".into()))
            }
            (None, None) => return Err(CliError::Schema("one of `rho2` or `geometry` is required".into())),
            (Some(r2), None) => {
                let f = self
                    .f
                    .ok_or_else(|| CliError::Schema("`f` is required when `rho2` is given".into()))?;
                let r2i = self
                    .rho2_inclusion
                    .map(|v| positive(v, "rho2_inclusion"))
                    .transpose()?;
                (f, positive(*r2, "rho2")?, r2i, None)
            }
            (None, Some(g)) => {
                let gdim = g
                    .rve
                    .validate()
                    .map_err(|e| CliError::from_core("geometry.rve", e))?;
                if gdim != dim {
                    return Err(CliError::Schema(format!(
                        "geometry is {}-dimensional but dim is {}",
                        gdim.n(),
                        dim.n()
                    )));
                }
                let r = check_gp(&g.rve, &g.inclusion, o.gp_tol)
                    .map_err(|e| CliError::from_core("geometry", e))?;
                if let Some(f) = self.f {
                    if (f - r.f).abs() > F_MATCH_TOL * f.abs().max(1.0) {
                        return Err(CliError::Schema(format!(
                            "f = {f} disagrees with the geometry volume fraction {}",
                            r.f
                        )));
                    }
                }
                if self.rho2_inclusion.is_some() {
                    return Err(CliError::Schema(
                        "`rho2_inclusion` is computed from `geometry`; do not give both".into(),
                    ));
                }
                warnings.extend(gp_warnings(&r));
                (
                    r.f,
                    r.rho_rve * r.rho_rve,
                    Some(r.rho_inclusion * r.rho_inclusion),
                    Some(r),
                )
            }
        };

        let problem = if is_eq {
            HomogenizationProblem::new(c1, eff_t, f, rho2)
        } else {
            HomogenizationProblem::from_c_tilde(c1, &eff_t, f, rho2)
        }
        .map_err(|e| CliError::from_core("problem", e))?;
        let problem = match &self.inclusion {
            Some(spec) => {
                let c2 = spec.to_tensor(dim, sym_tol, "inclusion")?;
                problem
                    .with_inclusion(c2)
                    .map_err(|e| CliError::from_core("inclusion", e))?
            }
            None => problem,
        };

        let a_external = self
            .a_eq
            .as_ref()
            .map(|s| s.to_tensor(dim, sym_tol, "a_eq"))
            .transpose()?;
        let c_hat = o
            .c_hat
            .as_ref()
            .map(|s| s.to_tensor(dim, sym_tol, "options.c_hat"))
            .transpose()?;

        if f > DILUTE_WARN_F {
            warnings.push(format!(
                "f = {f} exceeds {DILUTE_WARN_F}; the result is first order in f and meant for dilute inclusions"
            ));
        }
        if !problem.c_eq.definiteness().is_positive() {
            warnings.push("C_eq is not positive definite; energy bounds are omitted".into());
        }

        Ok(Resolved {
            problem,
            gp,
            rho2_inclusion,
            a_external,
            c_hat,
            settings,
            warnings,
        })
    }
}

pub fn gp_warnings(r: &GpReport) -> Vec<String> {
    let mut w = Vec::new();
    if !r.gp1_ok {
        w.push(format!(
            "matrix and inclusion centroids are off the RVE centroid (defect {:e}, tol {:e})",
            r.gp1_defect, r.tol
        ));
    }
    if !r.gp2_ok {
        w.push(format!(
            "Euler tensors of matrix or inclusion are not spherical (defect {:e}, tol {:e})",
            r.gp2_defect, r.tol
        ));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ProblemFile {
        serde_json::from_str(
            r#"{"version": 1, "dim": 3, "matrix": {"isotropic": {"lambda": 1.5, "mu": 1.0}},
                "c_tilde": {"isotropic": {"lambda": -0.6, "mu": -0.4}}, "f": 0.05, "rho2": 1.0}"#,
        )
        .unwrap()
    }

    #[test]
    fn components_round_trip_through_nested_arrays() {
        let c = Tensor4Elastic::isotropic(1.25, 0.5, Dim::Three);
        let spec = TensorSpec::Components(nest4(&c));
        assert_eq!(spec.to_tensor(Dim::Three, SYM_TOL, "c").unwrap(), c);
        let a = Tensor6Sge::isotropic([0.1, -0.2, 0.3, 1.0, 0.4], Dim::Two);
        let spec = SgeTensorSpec::Components(nest6(&a));
        assert_eq!(spec.to_tensor(Dim::Two, SYM_TOL, "a").unwrap(), a);
    }

    #[test]
    fn ragged_components_name_the_position() {
        let mut nested = nest4(&Tensor4Elastic::isotropic(1.0, 1.0, Dim::Two));
        nested[1][0].pop();
        let err = TensorSpec::Components(nested)
            .to_tensor(Dim::Two, SYM_TOL, "matrix")
            .unwrap_err();
        assert!(err.to_string().contains("index (2,1)"), "{err}");
        assert_eq!(err.code(), crate::error::EXIT_SCHEMA);
    }

    #[test]
    fn exclusive_fields() {
        let mut p = base();
        p.c_eq = p.c_tilde.clone();
        assert!(matches!(
            p.resolve(Overrides::default()),
            Err(CliError::Schema(_))
        ));
        let mut p = base();
        p.c_tilde = None;
        assert!(matches!(
            p.resolve(Overrides::default()),
            Err(CliError::Schema(_))
        ));
        let mut p = base();
        p.f = None;
        assert!(matches!(
            p.resolve(Overrides::default()),
            Err(CliError::Schema(_))
        ));
    }

    #[test]
    fn overrides_take_precedence() {
        let mut p = base();
        p.options.samples = Some(5);
        p.options.seed = Some(9);
        let r = p.resolve(Overrides::default()).unwrap();
        assert_eq!((r.settings.samples, r.settings.seed), (5, 9));
        let ov = Overrides {
            samples: Some(3),
            seed: Some(4),
            tol: Some(1e-8),
        };
        let r = p.resolve(ov).unwrap();
        assert_eq!(
            (r.settings.samples, r.settings.seed, r.settings.tol),
            (3, 4, 1e-8)
        );
    }

    #[test]
    fn dilute_warning() {
        let mut p = base();
        assert!(p.resolve(Overrides::default()).unwrap().warnings.is_empty());
        p.f = Some(0.2);
        let w = p.resolve(Overrides::default()).unwrap().warnings;
        assert!(w.iter().any(|s| s.contains("dilute")), "{w:?}");
    }

    #[test]
    fn geometry_sets_f_and_rho() {
        let mut p = base();
        p.rho2 = None;
        p.f = None;
        p.geometry = Some(GeometryBlock {
            rve: ShapeSpec::ball(&[0.0, 0.0, 0.0], 1.0),
            inclusion: ShapeSpec::ball(&[0.0, 0.0, 0.0], 0.5),
            inclusion_family: None,
        });
        let r = p.resolve(Overrides::default()).unwrap();
        assert!((r.problem.f - 0.125).abs() < 1e-15);
        assert!((r.problem.rho2 - 0.2).abs() < 1e-15);
        assert!((r.rho2_inclusion.unwrap() - 0.05).abs() < 1e-15);

        p.f = Some(0.1);
        assert!(matches!(
            p.resolve(Overrides::default()),
            Err(CliError::Schema(_))
        ));
    }

    #[test]
    fn wrong_version_is_a_schema_error() {
        let mut p = base();
        p.version = 2;
        assert!(matches!(
            p.resolve(Overrides::default()),
            Err(CliError::Schema(_))
        ));
    }
}
