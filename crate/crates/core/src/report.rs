//! JSON map input and the machine-readable pipeline report.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detcx::ResultantOutcome;
use crate::geometry::{ConditionReport, FactorSource, ImplicitReport};
use crate::koszul::{KoszulError, MapSpec, Mode};
use crate::poly::{parse_poly, PolyError, RingSpec};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairInput {
    pub f: String,
    pub g: String,
}

/// `{"t_vars": [...], "pairs": [{"f": .., "g": ..}], "mode": "strict"}`.
/// Pair variables are named `x0, y0, x1, y1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapInput {
    pub t_vars: Vec<String>,
    pub pairs: Vec<PairInput>,
    #[serde(default)]
    pub mode: Mode,
}

impl MapInput {
    pub fn from_json(s: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn ring(&self) -> Result<Arc<RingSpec>, ReportError> {
        let names: Vec<&str> = self.t_vars.iter().map(String::as_str).collect();
        Ok(RingSpec::with_default_pairs(&names)?)
    }

    /// Builds the map, with `mode` overriding the one in the file.
    pub fn to_spec(&self, mode: Option<Mode>) -> Result<MapSpec, ReportError> {
        let ring = self.ring()?;
        let pairs: Vec<(&str, &str)> = self.pairs.iter().map(|p| (p.f.as_str(), p.g.as_str())).collect();
        Ok(MapSpec::parse(&ring, &pairs, mode.unwrap_or(self.mode))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingInfo {
    pub t_vars: Vec<String>,
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtraFactor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    pub alpha: Vec<usize>,
    pub factor: String,
    pub exponent: u32,
}

/// Where a map built from an integer matrix came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixProvenance {
    pub input: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<Vec<Vec<i64>>>,
    pub used: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub ring: RingInfo,
    pub pairs: Vec<PairInput>,
    pub resultant: String,
    pub multidegree: Vec<u32>,
    #[serde(rename = "H")]
    pub h: Option<String>,
    pub deg_phi: Option<u32>,
    pub extra_factors: Vec<ExtraFactor>,
    pub conditions: Option<serde_json::Value>,
    pub diagnostics: Vec<String>,
    pub timings_ms: BTreeMap<String, u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixProvenance>,
}

fn ring_info(ring: &RingSpec) -> RingInfo {
    RingInfo { t_vars: ring.t_vars().to_vec(), pairs: ring.pairs().to_vec() }
}

fn pair_inputs(spec: &MapSpec) -> Vec<PairInput> {
    spec.pairs().iter().map(|p| PairInput { f: p.f.to_string(), g: p.g.to_string() }).collect()
}

fn conditions_json(c: Option<&ConditionReport>) -> Option<serde_json::Value> {
    c.map(|c| serde_json::to_value(c).expect("condition report serializes"))
}

impl Report {
    pub fn from_implicit(spec: &MapSpec, r: &ImplicitReport) -> Self {
        let extra_factors = r
            .attributions
            .iter()
            .map(|a| {
                let (point, component) = match &a.source {
                    FactorSource::Points(ps) => (Some(ps.iter().map(|p| p.to_string()).collect()), None),
                    FactorSource::Component(c) => (None, Some(c.clone())),
                };
                ExtraFactor { point, component, alpha: a.alpha.clone(), factor: a.factor.to_string(), exponent: a.exponent }
            })
            .collect();
        Self {
            ring: ring_info(spec.ring()),
            pairs: pair_inputs(spec),
            resultant: r.res.poly.to_string(),
            multidegree: r.res.multidegree.clone(),
            h: r.h.as_ref().map(|h| h.to_string()),
            deg_phi: r.deg_phi,
            extra_factors,
            conditions: conditions_json(r.conditions.as_ref()),
            diagnostics: r.diagnostics.clone(),
            timings_ms: r.timings_ms.clone(),
            matrix: None,
        }
    }

    pub fn from_resultant(spec: &MapSpec, out: &ResultantOutcome, conditions: Option<&ConditionReport>) -> Self {
        let mut diagnostics: Vec<String> = conditions.map(|c| c.diagnostics.clone()).unwrap_or_default();
        diagnostics.extend(out.diagnostic.iter().cloned());
        Self {
            ring: ring_info(spec.ring()),
            pairs: pair_inputs(spec),
            resultant: out.res.poly.to_string(),
            multidegree: out.res.multidegree.clone(),
            h: None,
            deg_phi: None,
            extra_factors: vec![],
            conditions: conditions_json(conditions),
            diagnostics,
            timings_ms: BTreeMap::new(),
            matrix: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Re-parses every polynomial string in the report's own ring and prints
    /// it back in normalized form.
    pub fn renormalized(&self) -> Result<Self, ReportError> {
        let ring = RingSpec::new(self.ring.t_vars.clone(), self.ring.pairs.clone())?;
        let norm = |s: &str| -> Result<String, ReportError> { Ok(parse_poly(s, &ring)?.normalized().to_string()) };
        let mut out = self.clone();
        out.resultant = norm(&self.resultant)?;
        out.h = self.h.as_deref().map(norm).transpose()?;
        for f in &mut out.extra_factors {
            f.factor = norm(&f.factor)?;
        }
        Ok(out)
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: &str| s.push_str(&format!("{k:<14}{v}\n"));
        line("resultant", &self.resultant);
        line("multidegree", &format!("{:?}", self.multidegree));
        line("H", self.h.as_deref().unwrap_or("-"));
        line("deg_phi", &self.deg_phi.map_or("-".to_string(), |d| d.to_string()));
        for f in &self.extra_factors {
            let from = match (&f.point, &f.component) {
                (Some(p), _) => p.join(" "),
                (None, Some(c)) => c.clone(),
                (None, None) => String::new(),
            };
            line("extra factor", &format!("({})^{}  alpha {:?}  from {from}", f.factor, f.exponent, f.alpha));
        }
        if let Some(c) = &self.conditions {
            let flag = |k: &str| c.get(k).and_then(|v| v.as_bool()).map_or("-".to_string(), |b| b.to_string());
            line("acyclic", &flag("avramov_ok"));
            line("strict codim", &flag("strict_ok"));
        }
        for d in &self.diagnostics {
            line("diagnostic", d);
        }
        if !self.timings_ms.is_empty() {
            let t: Vec<String> = self.timings_ms.iter().map(|(k, v)| format!("{k} {v}ms")).collect();
            line("timings", &t.join(", "));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{implicitize, PipelineOptions};

    const EX1: &str = r#"{"t_vars": ["u", "v", "w"],
        "pairs": [{"f": "u", "g": "v"}, {"f": "u^2", "g": "v^2"}, {"f": "v^2", "g": "w^2"}]}"#;

    #[test]
    fn map_input_schema() {
        let input = MapInput::from_json(EX1).unwrap();
        assert_eq!(input.mode, Mode::Strict);
        let spec = input.to_spec(None).unwrap();
        assert_eq!(spec.degrees(), vec![1, 2, 2]);
        assert!(MapInput::from_json(r#"{"t_vars": ["u"], "pairs": [], "extra": 1}"#).is_err());
        let bad = r#"{"t_vars": ["u","v"], "pairs": [{"f": "u*v", "g": "u"}, {"f": "u", "g": "v"}]}"#;
        assert!(MapInput::from_json(bad).unwrap().to_spec(None).is_err());
    }

    #[test]
    fn report_round_trips() {
        let spec = MapInput::from_json(EX1).unwrap().to_spec(None).unwrap();
        let r = implicitize(&spec, &PipelineOptions::default()).unwrap();
        let report = Report::from_implicit(&spec, &r);
        assert_eq!(report.h.as_deref(), Some("x0^2*y1 - y0^2*x1"));
        assert_eq!(report.extra_factors[0].point, Some(vec!["(0:0:1)".to_string()]));
        let back = Report::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.renormalized().unwrap(), report);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in ["resultant", "multidegree", "H", "deg_phi", "extra_factors", "conditions", "timings_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
