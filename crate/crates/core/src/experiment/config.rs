//! Experiment configuration: a single camelCase JSON document.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kuranishi::SeedKind;
use crate::majorant::parse_rational;
use crate::torus::TorusGeometry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    OperatorAxioms,
    VerifyIdentities,
    QuasiIsometry,
    DbarInverse,
    Kuranishi,
    KahlerFamily,
    Majorant,
    Calibrate,
}

/// A positive number, or `"auto"` to derive it from calibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormSpec {
    Value(f64),
    Keyword(String),
}

impl NormSpec {
    pub fn is_auto(&self) -> bool {
        matches!(self, NormSpec::Keyword(s) if s == "auto")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SeedSpec {
    pub kind: SeedKind,
    #[serde(default)]
    pub rng_seed: u64,
    pub target_c1_norm: NormSpec,
    #[serde(default = "one")]
    pub band: usize,
}

/// Rationals are accepted as `"a/b"` strings, integers or decimals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Text(String),
    Number(serde_json::Number),
}

impl RationalSpec {
    pub fn parse(&self) -> Result<BigRational> {
        match self {
            RationalSpec::Text(s) => parse_rational(s),
            RationalSpec::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MajorantSpec {
    pub c: RationalSpec,
    pub x1: RationalSpec,
    #[serde(default)]
    pub tau: Option<RationalSpec>,
}

fn one() -> usize {
    1
}
fn default_order() -> usize {
    6
}
fn default_instances() -> usize {
    50
}
fn default_samples() -> usize {
    1000
}
fn default_t_grid() -> Vec<f64> {
    vec![0.25, 0.5, 0.9]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: TorusGeometry,
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: Option<SeedSpec>,
    /// Truncation order `N`.
    #[serde(default = "default_order")]
    pub order: usize,
    /// Number of series parameters `m`.
    #[serde(default = "one")]
    pub parameters: usize,
    /// Per-check tolerance overrides, keyed by tolerance name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub output_dir: Option<String>,
    /// Random instances per identity or per operator check.
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_samples")]
    pub calibration_samples: usize,
    #[serde(default)]
    pub majorant: Option<MajorantSpec>,
    /// Base seed for instance streams that are not tied to a deformation seed.
    #[serde(default)]
    pub rng_seed: u64,
}

/// Default tolerances by name.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("operatorAxiom", 1e-10),
    ("identityMonomials", 0.0),
    ("estimateSlack", 1e-10),
    ("fourTermIdentity", 1e-8),
    ("isometryRatio", 1e-8),
    ("dbarInverse", 1e-10),
    ("integrability", 1e-9),
    ("sideCondition", 1e-9),
    ("harmonicPart", 1e-10),
    ("twoPath", 1e-9),
    ("familyResidual", 1e-9),
    ("closedForm", 1e-12),
    ("kahlerExactness", 1e-9),
    ("holomorphicity", 1e-9),
    ("cohomologyOrder1", 1e-10),
    ("cohomologyHigher", 1e-9),
    ("seriesConvergence", 1e-8),
];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| *v)
                .expect("known tolerance name")
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if let Err(e) = self.geometry.validate() {
            return bad(e.to_string());
        }
        if self.order == 0 {
            return bad("order must be at least 1".into());
        }
        if self.parameters == 0 {
            return bad("parameters must be at least 1".into());
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if self.calibration_samples == 0 {
            return bad("calibrationSamples must be at least 1".into());
        }
        for (k, v) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == k) {
                return bad(format!("unknown tolerance {k:?}"));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return bad(format!("tolerance {k:?} must be a nonnegative number"));
            }
        }
        if let Some(t) = self.t_grid.iter().find(|t| !(t.is_finite() && t.abs() < 1.0)) {
            return bad(format!("tGrid entries must satisfy |t| < 1, got {t}"));
        }
        match self.experiment {
            ExperimentKind::Kuranishi | ExperimentKind::KahlerFamily => {
                let Some(seed) = &self.seed else {
                    return bad("this experiment needs a seed".into());
                };
                match &seed.target_c1_norm {
                    NormSpec::Value(v) if !(v.is_finite() && *v > 0.0) => return bad("targetC1Norm must be positive".into()),
                    NormSpec::Keyword(k) if k != "auto" => return bad(format!("targetC1Norm must be a number or \"auto\", got {k:?}")),
                    _ => {}
                }
                if seed.kind == SeedKind::Explicit {
                    return bad("explicit seeds are supplied through the library or FFI, not the config".into());
                }
                if seed.band == 0 || seed.band > self.geometry.k {
                    return bad(format!("seed band must lie in 1..=K, got {}", seed.band));
                }
            }
            ExperimentKind::Majorant => {
                let Some(m) = &self.majorant else {
                    return bad("majorant experiment needs a majorant block".into());
                };
                let c = m.c.parse().map_err(|e| Error::Config(e.to_string()))?;
                m.x1.parse().map_err(|e| Error::Config(e.to_string()))?;
                if let Some(t) = &m.tau {
                    t.parse().map_err(|e| Error::Config(e.to_string()))?;
                }
                if c <= BigRational::from_integer(0.into()) {
                    return bad("majorant c must be positive".into());
                }
            }
            _ => {}
        }
        Ok(())
    }
}
