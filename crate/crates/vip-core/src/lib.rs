//! Foundational types for variational inequality problems: dense vectors,
//! operators, feasible sets with closed-form projections, residual metrics,
//! and sampling probes for operator classes (monotone, pseudomonotone,
//! Lipschitz).
//!
//! A variational inequality problem (VIP) asks for `x*` in a closed convex
//! set `C` with `<B(x*), x - x*> >= 0` for all `x` in `C`. Everything in
//! this crate is a pure value: operators and sets are immutable after
//! construction and safe to share across threads.

mod operator;
mod probes;
mod problem;
mod rng;
mod sets;
mod vector;

pub use operator::{EvalCounter, OperatorSpec};
pub use probes::{estimate_lipschitz, probe_monotone, probe_pseudomonotone, ProbeError};
pub use problem::{natural_residual, natural_residual_with, ExtraMetric, ProblemInstance};
pub use rng::SplitMix64;
pub use sets::{
    project_halfspace, project_l2_ball, project_nonneg_orthant, project_simplex,
    supporting_halfspace, FeasibleSet, HalfSpace,
};
pub use vector::Vector;
