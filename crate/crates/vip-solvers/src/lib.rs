//! Iterative solvers for pseudomonotone variational inequalities, each
//! behind the common [`Solver`] trait and selectable by name through
//! [`registry`].
//!
//! * `cg-segm` — self-adaptive subgradient extragradient method with a
//!   conjugate-gradient-type search direction and Halpern anchoring.
//! * `egm` — classical extragradient (two feasible-set projections).
//! * `popov` — single-operator-evaluation variant.
//! * `segm` — subgradient extragradient (second projection onto a
//!   supporting half-space).
//! * `yang` — self-adaptive subgradient extragradient baseline.
//!
//! All solvers consume a `vip_core::ProblemInstance`, emit a per-iteration
//! trace, and stop on a configurable criterion (natural residual or
//! predictor gap), an iteration cap, or a non-finite guard.
//!
//! ```
//! use vip_core::{FeasibleSet, OperatorSpec, ProblemInstance, Vector};
//! use vip_solvers::{registry::build_solver, StopReason, StopRule};
//!
//! // B(x) = x on the nonnegative orthant has the unique solution 0.
//! let problem = ProblemInstance::new(
//!     2,
//!     OperatorSpec::new("identity", |x: &Vector| x.clone()).with_lipschitz_hint(1.0),
//!     FeasibleSet::nonneg_orthant(),
//! );
//! let solver = build_solver("egm", &serde_json::json!({}), &problem).unwrap();
//! let out = solver
//!     .solve(&problem, &Vector::from_slice(&[1.0, 0.5]), &StopRule::residual(1e-8, 1000))
//!     .unwrap();
//! assert_eq!(out.reason, StopReason::Converged);
//! assert!(out.x.norm() < 1e-7);
//! ```

mod baselines;
mod cg_segm;
pub mod registry;
mod schedule;
mod trace;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vip_core::{ProblemInstance, Vector};

pub use baselines::{egm_step, popov_step, segm_step, yang_step, Egm, Popov, Segm, Yang};
pub use cg_segm::{
    adaptive_stepsize, cg_direction, iterate_once, CgSegm, CgSegmParams, SolverState,
};
pub use schedule::{power_schedule, PowerSchedule};
pub use trace::IterationRecord;

/// Which per-iteration quantity the tolerance applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopCriterion {
    /// Natural residual `||x - P_C(x - B(x))||`.
    Residual,
    /// Predictor gap `||x_j - w_j||` (`||x_j - y_j||` for the baselines).
    GapXw,
}

/// Stopping rule shared by all solvers.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StopRule {
    pub criterion: StopCriterion,
    pub tol: f64,
    pub max_iters: u64,
}

impl StopRule {
    pub fn residual(tol: f64, max_iters: u64) -> Self {
        StopRule {
            criterion: StopCriterion::Residual,
            tol,
            max_iters,
        }
    }

    fn met(&self, record: &IterationRecord) -> bool {
        let value = match self.criterion {
            StopCriterion::Residual => record.residual,
            StopCriterion::GapXw => record.gap_xw,
        };
        value <= self.tol
    }
}

/// Why a solve loop ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The configured criterion reached its tolerance; the returned iterate
    /// is the one that passed.
    Converged,
    /// Iteration cap reached.
    MaxIters,
    /// A non-finite iterate or operator value appeared (divergence guard).
    NonFinite,
}

/// Result of a solve: final iterate, full per-iteration trace, stop reason.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub x: Vector,
    pub trace: Vec<IterationRecord>,
    pub reason: StopReason,
}

impl SolveOutcome {
    pub fn iterations(&self) -> u64 {
        self.trace.len() as u64
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.trace.last().map(|r| r.residual)
    }
}

/// Parameter or setup rejection raised before any iteration runs.
#[derive(Debug, Error)]
pub enum ParamError {
    #[error("mu must lie in (0,1), got {0}")]
    MuOutOfRange(f64),
    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("anchor schedule must have the form 1/(a*j+b)^p with a > 0, b > 1, p in (0,1]: {0}")]
    BadAnchorSchedule(String),
    #[error("momentum schedule must have the form c/(j+1)^p with c >= 0 and p > 1: {0}")]
    BadMomentumSchedule(String),
    #[error("anchor point must lie in the feasible set {0}")]
    AnchorInfeasible(String),
    #[error("dimension mismatch: problem has {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("step size {lambda} is inadmissible for {algorithm}: require lambda < {bound}")]
    StepTooLarge {
        algorithm: &'static str,
        lambda: f64,
        bound: f64,
    },
    #[error("{algorithm} needs an explicit step size: the problem carries no Lipschitz hint")]
    StepRequired { algorithm: &'static str },
}

/// A VIP algorithm selected at runtime. Implementations are immutable and
/// reusable; each `solve` call owns its own state.
pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Runs the method from `x0`. Setup problems (infeasible anchor,
    /// dimension mismatch) are rejected before the first iteration;
    /// numerical blow-up during iteration ends the run with
    /// [`StopReason::NonFinite`] instead.
    fn solve(
        &self,
        problem: &ProblemInstance,
        x0: &Vector,
        stop: &StopRule,
    ) -> Result<SolveOutcome, ParamError>;
}

pub(crate) fn extra_metrics_at(
    problem: &ProblemInstance,
    x: &Vector,
) -> Vec<(std::sync::Arc<str>, f64)> {
    problem
        .extra_metrics()
        .iter()
        .map(|m| (m.shared_name(), m.eval(x)))
        .collect()
}
