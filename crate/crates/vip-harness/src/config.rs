use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vip_core::ProblemInstance;
use vip_problems::{BallProblem, GameProblem, SunProblem, WealthMode};
use vip_solvers::{StopCriterion, StopRule};

/// Stream separator so house wealth and the initial point draw from
/// unrelated parts of the seed space.
const WEALTH_STREAM: u64 = 0x57454c_54480001;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown preset {0:?}; available: {1}")]
    UnknownPreset(String, String),
    #[error(
        "dim {dim} conflicts with the game problem: the joint dimension is 2*houses = {expected}"
    )]
    GameDimension { dim: usize, expected: usize },
    #[error("{field} must be positive")]
    NonPositive { field: &'static str },
    #[error("no config given: pass --config and/or --preset")]
    Empty,
}

/// Full run configuration. Every field has a default; unknown keys are
/// rejected at parse time.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub algorithm: AlgorithmConfig,
    /// Per-algorithm parameter blocks used by `compare`; the block for a
    /// name defaults to `{}` (all algorithm defaults).
    pub algorithms: BTreeMap<String, serde_json::Value>,
    pub stopping: StoppingConfig,
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Sun,
    Ball,
    Game,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    /// Space dimension; defaults per kind (sun 100, ball 50, game derived
    /// as `2 * houses`).
    pub dim: Option<usize>,
    /// Ball feasible-set radius.
    pub radius: f64,
    /// Number of houses in the game.
    pub houses: usize,
    /// Distance decay of the catch probability.
    pub alpha: f64,
    /// Distance between adjacent houses on the line.
    pub spacing: f64,
    pub wealth: WealthConfig,
    /// Seed for the initial point and (in the game) the wealth draw.
    pub seed: u64,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            kind: ProblemKind::Ball,
            dim: None,
            radius: 5.0,
            houses: 50,
            alpha: 0.8,
            spacing: 1.0,
            wealth: WealthConfig::default(),
            seed: 42,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WealthConfig {
    /// Wealth per house uniform on [1, 2], drawn from the problem seed.
    #[default]
    SeededUniform,
    /// Identical wealth for every house.
    Constant { value: f64 },
}

impl ProblemConfig {
    /// Resolved dimension of the iterate space.
    pub fn resolved_dim(&self) -> Result<usize, ConfigError> {
        match self.kind {
            ProblemKind::Sun => Ok(self.dim.unwrap_or(100)),
            ProblemKind::Ball => Ok(self.dim.unwrap_or(50)),
            ProblemKind::Game => {
                let expected = 2 * self.houses;
                match self.dim {
                    Some(d) if d != expected => {
                        Err(ConfigError::GameDimension { dim: d, expected })
                    }
                    _ => Ok(expected),
                }
            }
        }
    }

    pub fn build(&self) -> Result<ProblemInstance, ConfigError> {
        let dim = self.resolved_dim()?;
        if dim == 0 {
            return Err(ConfigError::NonPositive { field: "dim" });
        }
        match self.kind {
            ProblemKind::Sun => Ok(SunProblem::new(dim).instance()),
            ProblemKind::Ball => {
                if self.radius <= 0.0 {
                    return Err(ConfigError::NonPositive { field: "radius" });
                }
                Ok(BallProblem::with_radius(dim, self.radius).instance())
            }
            ProblemKind::Game => {
                if self.alpha <= 0.0 {
                    return Err(ConfigError::NonPositive { field: "alpha" });
                }
                if self.spacing <= 0.0 {
                    return Err(ConfigError::NonPositive { field: "spacing" });
                }
                let wealth = match self.wealth {
                    WealthConfig::SeededUniform => {
                        WealthMode::SeededUniform(self.seed ^ WEALTH_STREAM)
                    }
                    WealthConfig::Constant { value } => {
                        if value <= 0.0 {
                            return Err(ConfigError::NonPositive {
                                field: "wealth.value",
                            });
                        }
                        WealthMode::Constant(value)
                    }
                };
                Ok(GameProblem::new(self.houses, self.alpha, self.spacing, wealth).instance())
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ProblemKind::Sun => "sun",
            ProblemKind::Ball => "ball",
            ProblemKind::Game => "game",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgorithmConfig {
    pub name: String,
    pub params: serde_json::Value,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        AlgorithmConfig {
            name: "cg-segm".to_string(),
            params: serde_json::json!({}),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StoppingConfig {
    pub criterion: StopCriterion,
    pub tol: f64,
    pub max_iters: u64,
}

impl Default for StoppingConfig {
    fn default() -> Self {
        StoppingConfig {
            criterion: StopCriterion::Residual,
            tol: 1e-4,
            max_iters: 10_000,
        }
    }
}

impl From<StoppingConfig> for StopRule {
    fn from(cfg: StoppingConfig) -> StopRule {
        StopRule {
            criterion: cfg.criterion,
            tol: cfg.tol,
            max_iters: cfg.max_iters,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Output directory; falls back to `$VIP_OUT_DIR`, then `.`. A CLI
    /// `--out` flag overrides all of these.
    pub dir: Option<PathBuf>,
    pub trace: String,
    pub summary: String,
    /// With timing off, elapsed and wall-time columns are written as zero
    /// so identical runs produce byte-identical files.
    pub timing: bool,
    /// Keep every k-th trace row (the final row is always kept).
    pub trace_every: u64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            trace: "trace.csv".to_string(),
            summary: "summary.csv".to_string(),
            timing: true,
            trace_every: 1,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Effective config as one canonical JSON line, embedded in trace
    /// headers so a run is reproducible from its own output.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Recursive JSON merge: objects merge key-by-key, everything else is
/// replaced by the overlay. Used for `--preset` + `--config` layering.
pub fn merge_json(base: &mut serde_json::Value, overlay: serde_json::Value) {
    use serde_json::Value;
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge_json(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
