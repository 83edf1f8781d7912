//! Output documents. Every report deserializes back to an identical value.

use serde::{Deserialize, Serialize};

use mindlin_core::energy::{Certificate, EnergyReport, Sweep};
use mindlin_core::geometry::{Gp3Sweep, GpReport};
use mindlin_core::homog::MindlinEshel;
use mindlin_core::Definiteness;

use crate::schema::{Nested4, Nested6, ProblemFile, ShapesFile, TensorFile};

pub const TOOL_NAME: &str = "mindlin";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogenizationRecord {
    pub dim: usize,
    pub f: f64,
    pub rho2: f64,
    pub c_tilde: Nested4,
    pub a_eq: Nested6,
    pub pd_a: bool,
    pub definiteness_a: Definiteness,
    pub definiteness_neg_c_tilde: Definiteness,
    pub eig_min_a_eq: f64,
    pub eig_min_neg_c_tilde: f64,
    /// `[lambda, mu]` of `C_tilde` when it is isotropic.
    pub c_tilde_isotropic: Option<[f64; 2]>,
    pub isotropic_a: Option<[f64; 5]>,
    /// Only for isotropic `A_eq` in three dimensions.
    pub mindlin_eshel: Option<MindlinEshel>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogenizeReport {
    pub tool: ToolInfo,
    pub seed: u64,
    pub input: ProblemFile,
    pub geometry: Option<GpReport>,
    pub homogenization: HomogenizationRecord,
    pub certificate: Certificate,
    pub warnings: Vec<String>,
}

/// Which tensor `verify-energy` checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ASource {
    Computed,
    Input,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub samples: usize,
    pub tol: f64,
    pub max_mismatch_rel: f64,
    pub mismatch_ok: bool,
    pub sandwich_ok: bool,
}

impl From<&Certificate> for CertificateSummary {
    fn from(c: &Certificate) -> Self {
        CertificateSummary {
            samples: c.samples,
            tol: c.tol,
            max_mismatch_rel: c.max_mismatch_rel,
            mismatch_ok: c.mismatch_ok,
            sandwich_ok: c.sandwich_ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRunReport {
    pub tool: ToolInfo,
    pub seed: u64,
    pub input: ProblemFile,
    pub geometry: Option<GpReport>,
    pub a_source: ASource,
    pub summary: CertificateSummary,
    pub energy: Vec<EnergyReport>,
    pub fsweep: Option<Sweep>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub tool: ToolInfo,
    pub input: ShapesFile,
    pub gp: GpReport,
    pub gp3: Option<Gp3Sweep>,
    pub warnings: Vec<String>,
}

/// Closed-form test for an isotropic `C`: `n lambda + 2 mu > 0` and `mu > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicCheck {
    pub bulk: f64,
    pub shear: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdReport {
    pub tool: ToolInfo,
    pub input: TensorFile,
    pub eig_min: f64,
    pub norm: f64,
    pub definiteness: Definiteness,
    pub pd: bool,
    pub isotropic_c: Option<IsotropicCheck>,
    pub mindlin_eshel: Option<MindlinEshel>,
    /// Closed-form and eigenvalue verdicts agree; `None` when only one route
    /// applies or they differ within the tolerance band.
    pub routes_agree: Option<bool>,
    pub warnings: Vec<String>,
}

/// Pretty JSON with a trailing newline. Floats use the shortest decimal
/// form that parses back to the same bits.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
