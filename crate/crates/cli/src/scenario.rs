use crate::error::schema;
use crate::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "forward-curve")]
    ForwardCurve,
    #[serde(rename = "recon-curve")]
    ReconCurve,
    #[serde(rename = "recon-curve-tangential")]
    ReconCurveTangential,
    #[serde(rename = "forward-surface")]
    ForwardSurface,
    #[serde(rename = "recon-surface-2")]
    ReconSurface2,
    #[serde(rename = "recon-surface-3")]
    ReconSurface3,
    #[serde(rename = "conjugate")]
    Conjugate,
    #[serde(rename = "ambiguity")]
    Ambiguity,
    #[serde(rename = "normal-recon")]
    NormalRecon,
    #[serde(rename = "oracle-check")]
    OracleCheck,
    #[serde(rename = "plot-contour")]
    PlotContour,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::ForwardCurve => "forward-curve",
            Kind::ReconCurve => "recon-curve",
            Kind::ReconCurveTangential => "recon-curve-tangential",
            Kind::ForwardSurface => "forward-surface",
            Kind::ReconSurface2 => "recon-surface-2",
            Kind::ReconSurface3 => "recon-surface-3",
            Kind::Conjugate => "conjugate",
            Kind::Ambiguity => "ambiguity",
            Kind::NormalRecon => "normal-recon",
            Kind::OracleCheck => "oracle-check",
            Kind::PlotContour => "plot-contour",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub kind: Kind,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Batch {
    pub version: u32,
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Single(Scenario),
    Batch(Batch),
}

impl Input {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
        let input = if value.get("scenarios").is_some() {
            Input::Batch(serde_json::from_value(value).map_err(|e| schema(format!("batch: {e}")))?)
        } else {
            Input::Single(serde_json::from_value(value).map_err(|e| schema(format!("scenario: {e}")))?)
        };
        let versions: Vec<u32> = match &input {
            Input::Single(s) => vec![s.version],
            Input::Batch(b) => std::iter::once(b.version).chain(b.scenarios.iter().map(|s| s.version)).collect(),
        };
        if let Some(v) = versions.into_iter().find(|&v| v != VERSION) {
            return Err(schema(format!("unsupported version {v}; expected {VERSION}")));
        }
        Ok(input)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub version: u32,
    pub kind: Kind,
    /// The scenario payload as given.
    pub inputs: Value,
    pub outputs: Value,
    pub residuals: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchReport {
    pub version: u32,
    pub reports: Vec<RunReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Output {
    Single(RunReport),
    Batch(BatchReport),
}

impl Output {
    /// Copy with every timing field zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Output {
        let mut out = self.clone();
        match &mut out {
            Output::Single(r) => r.timing.elapsed_ms = 0.0,
            Output::Batch(b) => b.reports.iter_mut().for_each(|r| r.timing.elapsed_ms = 0.0),
        }
        out
    }
}
