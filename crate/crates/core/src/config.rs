//! Analysis configuration documents.

use serde::{Deserialize, Serialize};

use crate::dynamics::field::ParamField;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rings::Functor;
use crate::sheaf::{ParamSubset, SheafOptions, Topology};

fn default_grid() -> usize {
    101
}

fn default_tol() -> f64 {
    1e-9
}

fn default_functors() -> Vec<Functor> {
    Functor::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSpace {
    pub topology: Topology,
    pub range: (f64, f64),
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_tol")]
    pub tol_x: f64,
    #[serde(default = "default_tol")]
    pub tol_lambda: f64,
    /// Exact values that replace nearby detected bifurcations.
    #[serde(default)]
    pub pinned: Vec<f64>,
    /// Extra vertices at bifurcation-free values.
    #[serde(default)]
    pub refine: Vec<f64>,
}

/// A published or hand-derived dimension to compare the computed one against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub functor: Functor,
    pub degree: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative: Option<ParamSubset>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputTargets {
    /// File name stem for everything written to the output directory.
    pub stem: String,
    #[serde(default = "yes")]
    pub dot: bool,
    #[serde(default = "yes")]
    pub csv: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputTargets {
    fn default() -> Self {
        Self {
            stem: "sheafdyn".into(),
            dot: true,
            csv: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub system: ParamField,
    pub parameter: ParameterSpace,
    #[serde(default = "default_functors")]
    pub functors: Vec<Functor>,
    #[serde(default)]
    pub relative: Vec<ParamSubset>,
    #[serde(default)]
    pub expected: Vec<Expectation>,
    #[serde(default)]
    pub output: OutputTargets,
}

impl AnalysisConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_value(v: serde_json::Value) -> Result<Self> {
        let c: Self = serde_json::from_value(v).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        let p = &self.parameter;
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(p.range.0.is_finite() && p.range.1.is_finite() && p.range.0 < p.range.1) {
            return bad(format!("parameter range {:?} is not a finite interval", p.range));
        }
        if p.grid < 3 {
            return bad(format!("grid must have at least 3 points, got {}", p.grid));
        }
        for (name, t) in [("tol_x", p.tol_x), ("tol_lambda", p.tol_lambda)] {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("{name} must be positive, got {t}"));
            }
        }
        if p.pinned.iter().chain(&p.refine).any(|x| !x.is_finite()) {
            return bad("pinned and refinement values must be finite".into());
        }
        if self.functors.is_empty() {
            return bad("at least one functor is required".into());
        }
        if self.output.stem.is_empty() || self.output.stem.contains(['/', '\\']) {
            return bad(format!("output stem {:?} is not a plain file name", self.output.stem));
        }
        Ok(())
    }

    pub fn options(&self) -> SheafOptions {
        SheafOptions {
            tol_x: self.parameter.tol_x,
            tol_lambda: self.parameter.tol_lambda,
            grid: self.parameter.grid,
            exec: Execution::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PITCHFORK: &str = r#"{
        "system": {
            "field": { "polynomial": [[0], [0, 1], [0], [-1]] },
            "phase": { "type": "compactified_line" }
        },
        "parameter": { "topology": "line", "range": [-2, 2] },
        "relative": ["right-ray 1"]
    }"#;

    #[test]
    fn defaults_and_roundtrip() {
        let c = AnalysisConfig::from_json(PITCHFORK).unwrap();
        assert_eq!(c.parameter.grid, 101);
        assert_eq!(c.functors, vec![Functor::Boolean, Functor::Free]);
        assert_eq!(c.relative[0], ParamSubset::right_ray(1.0));
        assert_eq!(AnalysisConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let extra = PITCHFORK.replacen("\"relative\"", "\"colour\": 1, \"relative\"", 1);
        assert!(AnalysisConfig::from_json(&extra).is_err());
        let bad_range = PITCHFORK.replace("[-2, 2]", "[2, -2]");
        assert!(AnalysisConfig::from_json(&bad_range).is_err());
        let bad_subset = PITCHFORK.replace("right-ray 1", "ray 1");
        assert!(AnalysisConfig::from_json(&bad_subset).is_err());
        let nested = PITCHFORK.replace("\"range\"", "\"sparkle\": true, \"range\"");
        assert!(AnalysisConfig::from_json(&nested).is_err());
    }
}
