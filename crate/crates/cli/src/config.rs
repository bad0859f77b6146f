//! JSON experiment configuration.

use serde::{Deserialize, Serialize};

use railyard_core::limitshape::{AsymptoticModel, ObservationPoint};
use railyard_core::piecewise::PiecewiseBoundary;
use railyard_core::{Letter, Partition, RailYardSpec, Sign, Slot};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LetterCode {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCode {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl From<LetterCode> for Letter {
    fn from(l: LetterCode) -> Self {
        match l {
            LetterCode::L => Letter::L,
            LetterCode::R => Letter::R,
        }
    }
}

impl From<SignCode> for Sign {
    fn from(s: SignCode) -> Self {
        match s {
            SignCode::Plus => Sign::Plus,
            SignCode::Minus => Sign::Minus,
        }
    }
}

/// Explicit graph on columns l..=r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteModel {
    pub l: i64,
    pub r: i64,
    pub a: Vec<LetterCode>,
    pub b: Vec<SignCode>,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotConfig {
    pub letter: LetterCode,
    pub sign: SignCode,
    pub x: f64,
}

/// Limit model: breakpoints V_0 < … < V_m and one period of slots per segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicModel {
    pub breakpoints: Vec<f64>,
    pub periods: Vec<Vec<SlotConfig>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundaryConfig {
    #[default]
    Empty,
    Staircase {
        m: u32,
    },
    /// `levels` strictly decreasing, `blocks[i]` rows on `levels[i]`.
    Piecewise {
        levels: Vec<u32>,
        blocks: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

fn default_orders() -> Vec<u32> {
    vec![1, 2, 3]
}
fn default_u_grid_per_interval() -> usize {
    400
}
fn default_samples() -> usize {
    1000
}
fn default_cap() -> u64 {
    40
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    /// Observed column of a finite model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<i64>,
    /// Observed χ of a periodic model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(default = "default_orders")]
    pub orders: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_grid: Option<KappaGrid>,
    /// Curve parameter points per interval between singular parameters.
    #[serde(default = "default_u_grid_per_interval")]
    pub u_grid_per_interval: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_cap")]
    pub cap: u64,
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig {
            column: None,
            chi: None,
            orders: default_orders(),
            kappa_grid: None,
            u_grid_per_interval: default_u_grid_per_interval(),
            samples: default_samples(),
            seed: None,
            cap: default_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite: Option<FiniteModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicModel>,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub task: TaskConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn config_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Schema version, exactly one model form, and a model that builds.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match (&self.finite, &self.periodic) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either `finite` or `periodic`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "no model: add `finite` or `periodic`".into(),
                ))
            }
            (Some(_), None) => {
                self.spec()?;
            }
            (None, Some(_)) => {
                self.asymptotic_model()?;
            }
        }
        if let BoundaryConfig::Staircase { m: 0 } = self.boundary {
            return Err(CliError::Config(
                "staircase slope m must be positive".into(),
            ));
        }
        if let BoundaryConfig::Piecewise { levels, blocks } = &self.boundary {
            PiecewiseBoundary::from_blocks(levels.clone(), blocks.clone()).map_err(config_err)?;
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<RailYardSpec, CliError> {
        let f = self
            .finite
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a `finite` model".into()))?;
        let a: Vec<Letter> = f.a.iter().map(|&l| l.into()).collect();
        let b: Vec<Sign> = f.b.iter().map(|&s| s.into()).collect();
        RailYardSpec::build(f.l, f.r, &a, &b, &f.x).map_err(config_err)
    }

    /// Limit model and observation point: from the periodic model and χ,
    /// or from the finite model and its column.
    pub fn observation(&self) -> Result<(AsymptoticModel, ObservationPoint), CliError> {
        if self.periodic.is_some() {
            let model = self.asymptotic_model()?;
            let chi = self.task.chi.ok_or_else(|| {
                CliError::Config("task.chi is required for a periodic model".into())
            })?;
            let pt = ObservationPoint::from_chi(&model, chi).map_err(config_err)?;
            Ok((model, pt))
        } else {
            let spec = self.spec()?;
            let t = self.task.column.ok_or_else(|| {
                CliError::Config("task.column is required for a finite model".into())
            })?;
            AsymptoticModel::from_finite(&spec, t).map_err(config_err)
        }
    }

    pub fn asymptotic_model(&self) -> Result<AsymptoticModel, CliError> {
        if let Some(p) = &self.periodic {
            let periods = p
                .periods
                .iter()
                .map(|per| {
                    per.iter()
                        .map(|s| Slot::new(s.letter.into(), s.sign.into(), s.x))
                        .collect()
                })
                .collect();
            return AsymptoticModel::periodic(p.breakpoints.clone(), periods).map_err(config_err);
        }
        Ok(self.observation()?.0)
    }

    /// Staircase slope of the boundary; 1 for the empty boundary.
    pub fn slope(&self) -> Option<u32> {
        match self.boundary {
            BoundaryConfig::Empty => Some(1),
            BoundaryConfig::Staircase { m } => Some(m),
            BoundaryConfig::Piecewise { .. } => None,
        }
    }

    pub fn piecewise(&self) -> Result<PiecewiseBoundary, CliError> {
        match &self.boundary {
            BoundaryConfig::Piecewise { levels, blocks } => {
                PiecewiseBoundary::from_blocks(levels.clone(), blocks.clone()).map_err(config_err)
            }
            _ => Err(CliError::Config(
                "this command needs a piecewise boundary".into(),
            )),
        }
    }

    /// Left boundary partition of the finite graph. The staircase has one
    /// row per (L,−) slot.
    pub fn left_partition(&self) -> Result<Partition, CliError> {
        match &self.boundary {
            BoundaryConfig::Empty => Ok(Partition::empty()),
            BoundaryConfig::Staircase { m } => {
                let n = self
                    .spec()?
                    .slots()
                    .iter()
                    .filter(|s| s.letter == Letter::L && s.sign == Sign::Minus)
                    .count();
                Ok(Partition::staircase(*m, n))
            }
            BoundaryConfig::Piecewise { .. } => {
                Ok(self.piecewise()?.partition().expect("built from blocks"))
            }
        }
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.task
            .seed
            .ok_or_else(|| CliError::Config("task.seed is required for sampling".into()))
    }
}
