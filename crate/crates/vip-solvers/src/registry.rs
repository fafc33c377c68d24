//! Name-keyed solver registry. The harness selects an algorithm at runtime
//! from its config; each entry parses its own parameter block and builds a
//! boxed [`Solver`] against the concrete problem (which supplies dimension,
//! anchor projection, and Lipschitz-hint defaults).

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vip_core::{ProblemInstance, Vector};

use crate::schedule::PowerSchedule;
use crate::{CgSegm, CgSegmParams, Egm, ParamError, Popov, Segm, Solver, Yang};

/// Registered algorithm names, in registry order.
pub const ALGORITHM_NAMES: &[&str] = &["cg-segm", "egm", "popov", "segm", "yang"];

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("unknown algorithm {0:?}; registered: {}", ALGORITHM_NAMES.join(", "))]
    UnknownAlgorithm(String),
    #[error("invalid parameters for {algorithm}: {source}")]
    BadParams {
        algorithm: &'static str,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Rejected(#[from] ParamError),
}

/// Anchor-weight schedule `alpha_j = 1/(a*j + b)^p` as written in configs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorScheduleConfig {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl From<AnchorScheduleConfig> for PowerSchedule {
    fn from(cfg: AnchorScheduleConfig) -> Self {
        PowerSchedule {
            c: 1.0,
            a: cfg.a,
            b: cfg.b,
            p: cfg.p,
        }
    }
}

/// Momentum schedule `Gamma_j = c/(j+1)^p` as written in configs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumScheduleConfig {
    pub c: f64,
    pub p: f64,
}

impl From<MomentumScheduleConfig> for PowerSchedule {
    fn from(cfg: MomentumScheduleConfig) -> Self {
        PowerSchedule {
            c: cfg.c,
            a: 1.0,
            b: 1.0,
            p: cfg.p,
        }
    }
}

/// Parameter block for `cg-segm`. The anchor is given as a scalar: the
/// vector `rho_scale * (1,...,1)` projected onto the feasible set.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CgSegmConfig {
    pub mu: f64,
    pub psi: f64,
    pub lambda0: f64,
    pub rho_scale: f64,
    pub alpha: AnchorScheduleConfig,
    pub gamma: MomentumScheduleConfig,
}

impl Default for CgSegmConfig {
    fn default() -> Self {
        CgSegmConfig {
            mu: 0.5,
            psi: 1.0,
            lambda0: 0.03,
            rho_scale: 0.2,
            alpha: AnchorScheduleConfig {
                a: 1000.0,
                b: 1000.0,
                p: 1.0,
            },
            gamma: MomentumScheduleConfig { c: 1.0, p: 1.2 },
        }
    }
}

impl CgSegmConfig {
    pub fn build(&self, problem: &ProblemInstance) -> Result<CgSegm, ParamError> {
        let anchor = problem.project(&Vector::constant(problem.dim(), self.rho_scale));
        CgSegm::new(CgSegmParams {
            mu: self.mu,
            psi: self.psi,
            lambda0: self.lambda0,
            anchor,
            alpha: self.alpha.into(),
            gamma: self.gamma.into(),
        })
    }
}

/// Parameter block for the fixed-step baselines (`egm`, `popov`, `segm`).
/// Without an explicit `lambda` the step defaults to `0.9/L` (EGM, SEGM) or
/// `0.9/(3L)` (Popov) from the problem's Lipschitz hint.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FixedStepConfig {
    pub lambda: Option<f64>,
}

/// Parameter block for `yang`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct YangConfig {
    pub lambda0: f64,
    pub mu: f64,
}

impl Default for YangConfig {
    fn default() -> Self {
        YangConfig {
            lambda0: 0.03,
            mu: 0.5,
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(
    algorithm: &'static str,
    params: &serde_json::Value,
) -> Result<T, BuildError> {
    serde_json::from_value(params.clone())
        .map_err(|source| BuildError::BadParams { algorithm, source })
}

/// Builds the named solver from a JSON parameter block. An empty object
/// selects every default.
pub fn build_solver(
    name: &str,
    params: &serde_json::Value,
    problem: &ProblemInstance,
) -> Result<Box<dyn Solver>, BuildError> {
    match name {
        "cg-segm" => {
            let cfg: CgSegmConfig = parse("cg-segm", params)?;
            Ok(Box::new(cfg.build(problem)?))
        }
        "egm" => {
            let cfg: FixedStepConfig = parse("egm", params)?;
            Ok(Box::new(Egm::for_problem(problem, cfg.lambda)?))
        }
        "popov" => {
            let cfg: FixedStepConfig = parse("popov", params)?;
            Ok(Box::new(Popov::for_problem(problem, cfg.lambda)?))
        }
        "segm" => {
            let cfg: FixedStepConfig = parse("segm", params)?;
            Ok(Box::new(Segm::for_problem(problem, cfg.lambda)?))
        }
        "yang" => {
            let cfg: YangConfig = parse("yang", params)?;
            Ok(Box::new(Yang::new(cfg.lambda0, cfg.mu)?))
        }
        other => Err(BuildError::UnknownAlgorithm(other.to_string())),
    }
}
