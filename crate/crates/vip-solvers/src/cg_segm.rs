use std::time::Instant;

use vip_core::{
    natural_residual_with, project_halfspace, supporting_halfspace, ProblemInstance, Vector,
};

use crate::schedule::PowerSchedule;
use crate::trace::IterationRecord;
use crate::{extra_metrics_at, ParamError, SolveOutcome, Solver, StopReason, StopRule};

/// Operator values closer than this are treated as equal in the adaptive
/// step rule; exact float equality would be meaningless.
const STEP_EQUALITY_TOL: f64 = 1e-14;

/// Controls of the self-adaptive conjugate-gradient subgradient
/// extragradient method.
///
/// The anchor schedule must vanish without being summable and the momentum
/// schedule must be summable; [`CgSegmParams::validate`] enforces the
/// accepted power-law families.
#[derive(Clone, Debug)]
pub struct CgSegmParams {
    /// Step-contraction factor in (0,1).
    pub mu: f64,
    /// Floor inside the momentum normalizer `max(||d_j||, psi)`.
    pub psi: f64,
    /// Initial step size.
    pub lambda0: f64,
    /// Anchor point; must lie in the feasible set.
    pub anchor: Vector,
    /// Anchor weights `alpha_j`.
    pub alpha: PowerSchedule,
    /// Momentum coefficients `Gamma_j`.
    pub gamma: PowerSchedule,
}

impl CgSegmParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.mu <= 0.0 || self.mu >= 1.0 || self.mu.is_nan() {
            return Err(ParamError::MuOutOfRange(self.mu));
        }
        if self.psi <= 0.0 || self.psi.is_nan() {
            return Err(ParamError::NotPositive {
                name: "psi",
                value: self.psi,
            });
        }
        if self.lambda0 <= 0.0 || self.lambda0.is_nan() {
            return Err(ParamError::NotPositive {
                name: "lambda0",
                value: self.lambda0,
            });
        }
        self.alpha.validate_anchor_role()?;
        self.gamma.validate_momentum_role()?;
        Ok(())
    }
}

/// Loop-carried state: iterate, search direction, step size, and the last
/// predictor/corrector points for inspection.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub j: u64,
    pub x: Vector,
    /// `None` until the first iteration materializes `d_0 = -B(x_0)` from
    /// its own operator evaluation.
    pub d: Option<Vector>,
    pub lambda: f64,
    pub last_w: Option<Vector>,
    pub last_y: Option<Vector>,
}

impl SolverState {
    pub fn start(x0: Vector, lambda0: f64) -> Self {
        SolverState {
            j: 0,
            x: x0,
            d: None,
            lambda: lambda0,
            last_w: None,
            last_y: None,
        }
    }

    /// Overrides the search direction; for driving single steps in tests.
    pub fn with_direction(mut self, d: Vector) -> Self {
        self.d = Some(d);
        self
    }
}

/// Raised when an iterate or operator value stops being finite.
#[derive(Debug, thiserror::Error)]
#[error("non-finite value at iteration {iteration} ({stage})")]
pub struct NonFinite {
    pub iteration: u64,
    pub stage: &'static str,
}

/// Conjugate-gradient-type direction update:
/// `-B(x) + (gamma / max(||d_prev||, psi)) * d_prev`. The normalizer caps
/// the momentum contribution at `gamma` in norm and makes the division
/// safe for any `d_prev`.
pub fn cg_direction(d_prev: &Vector, b_x: &Vector, gamma: f64, psi: f64) -> Vector {
    assert!(psi > 0.0, "psi must be positive");
    let theta = gamma / d_prev.norm().max(psi);
    b_x.combine(-1.0, d_prev, theta)
}

/// Self-adaptive step update: contracts toward the observed inverse
/// curvature ratio `mu * ||w - x|| / ||B(w) - B(x)||` and never increases.
pub fn adaptive_stepsize(
    lambda: f64,
    mu: f64,
    x: &Vector,
    w: &Vector,
    b_x: &Vector,
    b_w: &Vector,
) -> f64 {
    debug_assert!(lambda > 0.0 && mu > 0.0 && mu < 1.0);
    let denom = b_w.distance(b_x);
    if denom > STEP_EQUALITY_TOL {
        (mu * w.distance(x) / denom).min(lambda)
    } else {
        lambda
    }
}

/// One full iteration: direction update, projection onto the feasible set,
/// projection onto the supporting half-space, anchor combination, and the
/// adaptive step update. Exactly two operator evaluations, `B(x_j)` and
/// `B(w_j)`.
///
/// The returned record carries the natural residual at `x_j` (computed from
/// the same `B(x_j)` evaluation), the gap `||x_j - w_j||`, and the step
/// `lambda_j` that was used; `elapsed` is left at zero for the driving loop
/// to fill in.
pub fn iterate_once(
    state: &SolverState,
    problem: &ProblemInstance,
    params: &CgSegmParams,
) -> Result<(SolverState, IterationRecord), NonFinite> {
    let j = state.j;
    let guard = |ok: bool, stage: &'static str| {
        if ok {
            Ok(())
        } else {
            Err(NonFinite {
                iteration: j,
                stage,
            })
        }
    };

    let x = &state.x;
    let b_x = problem.eval(x);
    guard(b_x.is_finite(), "B(x)")?;

    let residual = natural_residual_with(x, &b_x, problem.set());
    let extra = extra_metrics_at(problem, x);

    let d_prev = match &state.d {
        Some(d) => d.clone(),
        None => -&b_x,
    };
    let d_next = cg_direction(&d_prev, &b_x, params.gamma.value(j), params.psi);

    let pre = x.combine(1.0, &d_next, state.lambda);
    guard(pre.is_finite(), "x + lambda*d")?;
    let w = problem.project(&pre);
    let gap_xw = x.distance(&w);
    let halfspace = supporting_halfspace(&pre, &w);

    let b_w = problem.eval(&w);
    guard(b_w.is_finite(), "B(w)")?;

    let y = project_halfspace(&x.combine(1.0, &b_w, -state.lambda), &halfspace);
    let lambda_next = adaptive_stepsize(state.lambda, params.mu, x, &w, &b_x, &b_w);

    let alpha = params.alpha.value(j);
    let x_next = params.anchor.combine(alpha, &y, 1.0 - alpha);
    guard(x_next.is_finite(), "anchor step")?;

    let record = IterationRecord {
        j,
        residual,
        gap_xw,
        lambda: state.lambda,
        elapsed: 0.0,
        extra,
    };
    let next = SolverState {
        j: j + 1,
        x: x_next,
        d: Some(d_next),
        lambda: lambda_next,
        last_w: Some(w),
        last_y: Some(y),
    };
    Ok((next, record))
}

/// The self-adaptive subgradient extragradient solver with
/// conjugate-gradient direction, registered as `cg-segm`.
#[derive(Clone, Debug)]
pub struct CgSegm {
    params: CgSegmParams,
}

impl CgSegm {
    pub fn new(params: CgSegmParams) -> Result<Self, ParamError> {
        params.validate()?;
        Ok(CgSegm { params })
    }

    pub fn params(&self) -> &CgSegmParams {
        &self.params
    }
}

impl Solver for CgSegm {
    fn name(&self) -> &'static str {
        "cg-segm"
    }

    fn solve(
        &self,
        problem: &ProblemInstance,
        x0: &Vector,
        stop: &StopRule,
    ) -> Result<SolveOutcome, ParamError> {
        self.params.validate()?;
        if x0.dim() != problem.dim() {
            return Err(ParamError::DimensionMismatch {
                expected: problem.dim(),
                got: x0.dim(),
            });
        }
        if self.params.anchor.dim() != problem.dim() {
            return Err(ParamError::DimensionMismatch {
                expected: problem.dim(),
                got: self.params.anchor.dim(),
            });
        }
        if !problem.set().contains(&self.params.anchor, 1e-8) {
            return Err(ParamError::AnchorInfeasible(
                problem.set().label().to_string(),
            ));
        }

        let start = Instant::now();
        let mut state = SolverState::start(x0.clone(), self.params.lambda0);
        let mut trace = Vec::new();
        for _ in 0..stop.max_iters {
            match iterate_once(&state, problem, &self.params) {
                Ok((next, mut record)) => {
                    record.elapsed = start.elapsed().as_secs_f64();
                    if !record.is_finite() {
                        return Ok(SolveOutcome {
                            x: state.x,
                            trace,
                            reason: StopReason::NonFinite,
                        });
                    }
                    let done = stop.met(&record);
                    trace.push(record);
                    if done {
                        // The measured iterate is the one that passed.
                        return Ok(SolveOutcome {
                            x: state.x,
                            trace,
                            reason: StopReason::Converged,
                        });
                    }
                    state = next;
                }
                Err(_) => {
                    return Ok(SolveOutcome {
                        x: state.x,
                        trace,
                        reason: StopReason::NonFinite,
                    });
                }
            }
        }
        Ok(SolveOutcome {
            x: state.x,
            trace,
            reason: StopReason::MaxIters,
        })
    }
}
