//! Kind-specific payload schemas. Unknown fields are rejected.

use crate::error::schema;
use crate::CliError;
use contour_jets::surface::SurfaceJet;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub fn parse<T: DeserializeOwned>(kind: &str, payload: &Value) -> Result<T, CliError> {
    serde_json::from_value(payload.clone()).map_err(|e| schema(format!("{kind} payload: {e}")))
}

/// Rescales every angle field by `factor` (degrees to radians at the boundary).
pub trait Angles {
    fn scale_angles(&mut self, factor: f64);
}

fn scale_opt(x: &mut Option<f64>, f: f64) {
    if let Some(v) = x {
        *v *= f;
    }
}

fn scale_arr<const N: usize>(x: &mut Option<[f64; N]>, f: f64) {
    if let Some(v) = x {
        v.iter_mut().for_each(|t| *t *= f);
    }
}

/// Exact polynomial surface in Monge form; absent coefficients are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub a20: f64,
    pub a02: f64,
    /// `[a30, a21, a12, a03]`.
    pub a3: Option<[f64; 4]>,
    /// Further `[i, j, a_ij]` entries of degree >= 4.
    pub terms: Option<Vec<(usize, usize, f64)>>,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<SurfaceJet, CliError> {
        let mut t = vec![(2, 0, self.a20), (0, 2, self.a02)];
        if let Some([a30, a21, a12, a03]) = self.a3 {
            t.extend([(3, 0, a30), (2, 1, a21), (1, 2, a12), (0, 3, a03)]);
        }
        for &(i, j, v) in self.terms.iter().flatten() {
            if i + j < 4 {
                return Err(schema(format!("terms entry a{i}{j}: use a20, a02 and a3 for degrees 2 and 3")));
            }
            if t.iter().any(|&(p, q, _)| (p, q) == (i, j)) {
                return Err(schema(format!("terms entry a{i}{j} is repeated")));
            }
            t.push((i, j, v));
        }
        let order = t.iter().map(|&(i, j, _)| i + j).max().unwrap_or(2).max(3);
        Ok(SurfaceJet::from_terms(order, &t)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardCurve {
    /// `[a2, a3, ...]`.
    pub a: Vec<f64>,
    /// `[b3, b4, ...]`.
    pub b: Vec<f64>,
    /// Osculating-plane direction.
    pub theta: Option<f64>,
    /// General direction `[theta1, theta2]` for the secondary jet of the tangential setting.
    pub direction: Option<[f64; 2]>,
    pub order: Option<usize>,
}

impl Angles for ForwardCurve {
    fn scale_angles(&mut self, f: f64) {
        scale_opt(&mut self.theta, f);
        scale_arr(&mut self.direction, f);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconCurve {
    /// Curvature jets `(kappa, kappa', kappa''/2!, ...)` of the two views.
    pub jet1: Vec<f64>,
    pub jet2: Vec<f64>,
    /// `theta2 - theta1`.
    pub phi: f64,
    pub n: Option<usize>,
}

impl Angles for ReconCurve {
    fn scale_angles(&mut self, f: f64) {
        self.phi *= f;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconCurveTangential {
    pub mu: f64,
    /// `(kappa(0), kappa'(0))` of the second view.
    pub jet: Vec<f64>,
    pub theta1: f64,
    pub theta2: f64,
}

impl Angles for ReconCurveTangential {
    fn scale_angles(&mut self, f: f64) {
        self.theta1 *= f;
        self.theta2 *= f;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardSurface {
    pub surface: SurfaceSpec,
    pub thetas: Vec<f64>,
}

impl Angles for ForwardSurface {
    fn scale_angles(&mut self, f: f64) {
        self.thetas.iter_mut().for_each(|t| *t *= f);
    }
}

/// Three views given either by angle differences or by absolute angles.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconSurface2 {
    pub k: [f64; 3],
    pub deltas: Option<[f64; 3]>,
    pub thetas: Option<[f64; 3]>,
}

impl Angles for ReconSurface2 {
    fn scale_angles(&mut self, f: f64) {
        scale_arr(&mut self.deltas, f);
        scale_arr(&mut self.thetas, f);
    }
}

pub fn deltas_from(kind: &str, deltas: Option<[f64; 3]>, thetas: Option<[f64; 3]>) -> Result<[f64; 3], CliError> {
    match (deltas, thetas) {
        (Some(d), None) => Ok(d),
        (None, Some(t)) => Ok(contour_jets::surface_recon::deltas_of(t)),
        _ => Err(schema(format!("{kind} payload needs exactly one of `deltas` and `thetas`"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconSurface3 {
    pub a20: f64,
    pub a02: f64,
    pub thetas: [f64; 4],
    /// `dk/ds` at the base point of each view.
    pub k1: [f64; 4],
}

impl Angles for ReconSurface3 {
    fn scale_angles(&mut self, f: f64) {
        self.thetas.iter_mut().for_each(|t| *t *= f);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conjugate {
    pub a20: f64,
    pub a02: f64,
    pub theta1: f64,
}

impl Angles for Conjugate {
    fn scale_angles(&mut self, f: f64) {
        self.theta1 *= f;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootName {
    Larger,
    Smaller,
}

/// Either the conic of a two-view measurement, optionally with two target
/// mean curvatures, or `{"demo": "degenerate-pair"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ambiguity {
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub delta: Option<f64>,
    /// Target mean curvatures `[M1, M2]`.
    pub m: Option<[f64; 2]>,
    pub roots: Option<[RootName; 2]>,
    pub demo: Option<String>,
}

impl Angles for Ambiguity {
    fn scale_angles(&mut self, f: f64) {
        scale_opt(&mut self.delta, f);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalRecon {
    pub kn: [f64; 3],
    pub deltas: Option<[f64; 3]>,
    pub thetas: Option<[f64; 3]>,
}

impl Angles for NormalRecon {
    fn scale_angles(&mut self, f: f64) {
        scale_arr(&mut self.deltas, f);
        scale_arr(&mut self.thetas, f);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCurve {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub theta: f64,
    pub order: Option<usize>,
}

/// Any combination of one explicit curve, one explicit surface view and
/// randomized suites drawn from the scenario seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheck {
    pub curve: Option<OracleCurve>,
    pub surface: Option<SurfaceSpec>,
    pub theta: Option<f64>,
    pub random_curves: Option<usize>,
    pub random_surfaces: Option<usize>,
}

impl Angles for OracleCheck {
    fn scale_angles(&mut self, f: f64) {
        if let Some(c) = &mut self.curve {
            c.theta *= f;
        }
        scale_opt(&mut self.theta, f);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotContour {
    pub surface: SurfaceSpec,
    pub theta: f64,
    /// Half-width of the sampled `u` range; defaults to `1 / max(|a20|, |a02|)`.
    pub half_width: Option<f64>,
    pub count: Option<usize>,
}

impl Angles for PlotContour {
    fn scale_angles(&mut self, f: f64) {
        self.theta *= f;
    }
}
