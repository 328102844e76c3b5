//! Experiment configuration (TOML).
//!
//! ```toml
//! schema_version = 1
//!
//! [run]
//! grid = 2000
//! checks = ["spectrum", "bounds", "estimates"]
//!
//! [[family]]
//! name = "weighted-sphere"
//! manifold = { kind = "sphere", radius = 1.0 }
//! dims = [2, 3, 4]
//! density = { kind = "cosine", epsilon = [0.1, 0.5, 0.9] }
//! ```

use std::path::Path;

use be_spectral::{Profile, WarpedManifold};
use serde::{Deserialize, Serialize};

use crate::LabError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub run: RunSettings,
    #[serde(default, rename = "family")]
    pub families: Vec<FamilyConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSettings {
    pub grid: usize,
    pub b: f64,
    pub bins: usize,
    pub workers: Option<usize>,
    pub checks: Vec<Check>,
    pub tolerance_profile: ToleranceProfile,
    /// Weight `σ` of the barrier used when the case split lands in B-2-b2.
    pub sigma: Option<f64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            grid: 2000,
            b: be_spectral::estimate::DEFAULT_B,
            bins: be_spectral::estimate::DEFAULT_BINS,
            workers: None,
            checks: Check::ALL.to_vec(),
            tolerance_profile: ToleranceProfile::Default,
            sigma: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Spectrum,
    Bounds,
    Estimates,
    Soliton,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Spectrum, Check::Bounds, Check::Estimates, Check::Soliton];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceProfile {
    Strict,
    #[default]
    Default,
}

/// Acceptance thresholds for the per-instance checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Allowed negative margin for eigenvalue lower bounds.
    pub bound: f64,
    /// Relative slack on the gradient estimate.
    pub gradient: f64,
    /// Allowed negative margin for barrier dominance.
    pub dominance: f64,
    /// Residual below which a candidate counts as a soliton.
    pub soliton: f64,
    /// `a` below this is treated as the symmetric case.
    pub symmetric_a: f64,
}

impl ToleranceProfile {
    pub fn tolerances(self) -> Tolerances {
        match self {
            ToleranceProfile::Default => {
                Tolerances { bound: 1e-6, gradient: 1e-2, dominance: 1e-2, soliton: 1e-8, symmetric_a: 1e-8 }
            }
            ToleranceProfile::Strict => {
                Tolerances { bound: 1e-9, gradient: 1e-3, dominance: 1e-3, soliton: 1e-10, symmetric_a: 1e-10 }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub name: String,
    pub manifold: ManifoldConfig,
    /// Ignored for circles.
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub density: DensityConfig,
    /// Shrinker constant for soliton checks; the potential is the density.
    pub gamma: Option<f64>,
}

fn default_dims() -> Vec<usize> {
    vec![2]
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ManifoldConfig {
    /// Round sphere of the given radius.
    Sphere {
        #[serde(default = "one")]
        radius: f64,
    },
    /// `w = sin r (1 + β sin² r)` on `[0, π]`.
    DeformedSphere { beta: f64 },
    Circle { length: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensityConfig {
    #[default]
    Zero,
    /// `ε cos(ω r)` for each listed `ε`.
    Cosine {
        epsilon: Vec<f64>,
        #[serde(default = "one")]
        frequency: f64,
    },
    /// `Σ c_k cos(ω r)^k`, one instance.
    CosPolynomial {
        coeffs: Vec<f64>,
        #[serde(default = "one")]
        frequency: f64,
    },
}

impl DensityConfig {
    /// `(ε, profile)` pairs; `ε` is `None` for single-profile families.
    pub fn instances(&self) -> Vec<(Option<f64>, Profile)> {
        match self {
            DensityConfig::Zero => vec![(None, Profile::zero())],
            DensityConfig::Cosine { epsilon, frequency } => {
                epsilon.iter().map(|&e| (Some(e), Profile::cosine(e, *frequency))).collect()
            }
            DensityConfig::CosPolynomial { coeffs, frequency } => {
                vec![(None, Profile::CosPolynomial { coeffs: coeffs.clone(), frequency: *frequency })]
            }
        }
    }
}

impl ManifoldConfig {
    pub fn build(&self, dim: usize, density: Profile) -> Result<WarpedManifold, be_spectral::Error> {
        match *self {
            // Densities are given in unit-sphere coordinates and stretch with the metric.
            ManifoldConfig::Sphere { radius } => WarpedManifold::round_sphere(dim, density)?.scaled(radius),
            ManifoldConfig::DeformedSphere { beta } => {
                // sin² = 1 - cos²
                let bump = Profile::CosPolynomial { coeffs: vec![1.0 + beta, 0.0, -beta], frequency: 1.0 };
                let warp = Profile::Product(vec![Profile::round_sphere(1.0), bump]);
                WarpedManifold::interval_sphere(dim, std::f64::consts::PI, warp, density)
            }
            ManifoldConfig::Circle { length } => WarpedManifold::circle(length, density),
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, ManifoldConfig::Circle { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ManifoldConfig::Sphere { .. } => "sphere",
            ManifoldConfig::DeformedSphere { .. } => "deformed-sphere",
            ManifoldConfig::Circle { .. } => "circle",
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, LabError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |m: String| Err(LabError::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        if self.families.is_empty() {
            return bad("no [[family]] entries".into());
        }
        let run = &self.run;
        if run.grid < 8 {
            return bad("run.grid must be at least 8".into());
        }
        if !(run.b > 1.0 && run.b.is_finite()) {
            return bad("run.b must exceed 1".into());
        }
        if run.bins == 0 {
            return bad("run.bins must be positive".into());
        }
        if run.workers == Some(0) {
            return bad("run.workers must be positive".into());
        }
        if run.checks.is_empty() {
            return bad("run.checks is empty".into());
        }
        let mut names = std::collections::BTreeSet::new();
        for f in &self.families {
            if !names.insert(f.name.as_str()) {
                return bad(format!("duplicate family name {:?}", f.name));
            }
            if !f.manifold.is_circle() && (f.dims.is_empty() || f.dims.iter().any(|&n| n < 2)) {
                return bad(format!("family {:?}: dims must be non-empty and at least 2", f.name));
            }
            if let DensityConfig::Cosine { epsilon, .. } = &f.density {
                if epsilon.is_empty() {
                    return bad(format!("family {:?}: empty epsilon list", f.name));
                }
            }
            if let Some(g) = f.gamma {
                if !(g > 0.0) {
                    return bad(format!("family {:?}: gamma must be positive", f.name));
                }
            }
            match f.manifold {
                ManifoldConfig::Sphere { radius } if !(radius > 0.0) => {
                    return bad(format!("family {:?}: radius must be positive", f.name));
                }
                ManifoldConfig::DeformedSphere { beta } if !(beta > -1.0) => {
                    return bad(format!("family {:?}: beta must exceed -1", f.name));
                }
                ManifoldConfig::Circle { length } if !(length > 0.0) => {
                    return bad(format!("family {:?}: length must be positive", f.name));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
[[family]]
name = "s2"
manifold = { kind = "sphere" }
"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.run, RunSettings::default());
        assert_eq!(c.families[0].dims, vec![2]);
        assert_eq!(c.families[0].density, DensityConfig::Zero);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let top = format!("{MINIMAL}\ncolour = 1\n");
        assert!(ExperimentConfig::from_toml(&top).is_err());
        let nested = MINIMAL.replace("kind = \"sphere\"", "kind = \"sphere\", raduis = 2.0");
        assert!(ExperimentConfig::from_toml(&nested).is_err());
        let run = MINIMAL.replace("schema_version = 1", "schema_version = 1\n[run]\ngird = 10");
        assert!(ExperimentConfig::from_toml(&run).is_err());
    }

    #[test]
    fn schema_version_is_checked() {
        assert!(ExperimentConfig::from_toml(&MINIMAL.replace("= 1", "= 2")).is_err());
    }

    #[test]
    fn empty_family_list_is_an_error() {
        assert!(ExperimentConfig::from_toml("schema_version = 1").is_err());
    }
}
