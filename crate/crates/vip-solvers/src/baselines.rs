//! Extragradient-family baselines: EGM, Popov's method, the subgradient
//! extragradient method (SEGM), and Yang et al.'s self-adaptive SEGM.
//!
//! Operator-evaluation budgets per iteration: EGM 2, Popov 1, SEGM 2,
//! Yang 2. The solver loops reuse the `B(x_j)` evaluation for the recorded
//! natural residual, so the budgets hold exactly.

use std::time::Instant;

use vip_core::{
    natural_residual_with, project_halfspace, supporting_halfspace, ProblemInstance, Vector,
};

use crate::trace::IterationRecord;
use crate::{extra_metrics_at, ParamError, SolveOutcome, Solver, StopReason, StopRule};

fn require_positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::NotPositive { name, value })
    }
}

/// Enforces `lambda < bound_factor / L` when a Lipschitz hint is available.
fn check_step_bound(
    algorithm: &'static str,
    lambda: f64,
    bound_factor: f64,
    problem: &ProblemInstance,
) -> Result<(), ParamError> {
    if let Some(l) = problem.operator().lipschitz_hint() {
        let bound = bound_factor / l;
        if lambda >= bound {
            return Err(ParamError::StepTooLarge {
                algorithm,
                lambda,
                bound,
            });
        }
    }
    Ok(())
}

struct LoopControl {
    start: Instant,
    trace: Vec<IterationRecord>,
}

impl LoopControl {
    fn new() -> Self {
        LoopControl {
            start: Instant::now(),
            trace: Vec::new(),
        }
    }

    /// Records the row; returns `Some(outcome)` when the loop should end
    /// (stop rule met or a malformed row).
    fn record(
        &mut self,
        mut record: IterationRecord,
        current: &Vector,
        stop: &StopRule,
    ) -> Option<SolveOutcome> {
        record.elapsed = self.start.elapsed().as_secs_f64();
        if !record.is_finite() {
            return Some(SolveOutcome {
                x: current.clone(),
                trace: std::mem::take(&mut self.trace),
                reason: StopReason::NonFinite,
            });
        }
        let done = stop.met(&record);
        self.trace.push(record);
        if done {
            Some(SolveOutcome {
                x: current.clone(),
                trace: std::mem::take(&mut self.trace),
                reason: StopReason::Converged,
            })
        } else {
            None
        }
    }

    fn finish(self, x: Vector, reason: StopReason) -> SolveOutcome {
        SolveOutcome {
            x,
            trace: self.trace,
            reason,
        }
    }
}

// ---------------------------------------------------------------------------
// EGM

/// One extragradient step: `y = P_C(x - lambda B(x))`,
/// `x_next = P_C(x - lambda B(y))`. Two projections, two evaluations.
pub fn egm_step(x: &Vector, problem: &ProblemInstance, lambda: f64) -> Vector {
    let b_x = problem.eval(x);
    egm_update(x, &b_x, problem, lambda).1
}

fn egm_update(
    x: &Vector,
    b_x: &Vector,
    problem: &ProblemInstance,
    lambda: f64,
) -> (Vector, Vector) {
    let y = problem.project(&x.combine(1.0, b_x, -lambda));
    let b_y = problem.eval(&y);
    let x_next = problem.project(&x.combine(1.0, &b_y, -lambda));
    (y, x_next)
}

/// Fixed-step extragradient method, registered as `egm`.
#[derive(Clone, Debug)]
pub struct Egm {
    lambda: f64,
}

impl Egm {
    pub fn new(lambda: f64) -> Result<Self, ParamError> {
        require_positive("lambda", lambda)?;
        Ok(Egm { lambda })
    }

    /// Resolves the step against the problem: explicit value, else the
    /// default `0.9 / L` from the Lipschitz hint. Admissibility
    /// (`lambda < 1/L`) is enforced whenever a hint exists.
    pub fn for_problem(problem: &ProblemInstance, lambda: Option<f64>) -> Result<Self, ParamError> {
        let lambda = resolve_step("egm", problem, lambda, 0.9)?;
        check_step_bound("egm", lambda, 1.0, problem)?;
        Egm::new(lambda)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

fn resolve_step(
    algorithm: &'static str,
    problem: &ProblemInstance,
    lambda: Option<f64>,
    default_factor: f64,
) -> Result<f64, ParamError> {
    match (lambda, problem.operator().lipschitz_hint()) {
        (Some(l), _) => Ok(l),
        (None, Some(hint)) => Ok(default_factor / hint),
        (None, None) => Err(ParamError::StepRequired { algorithm }),
    }
}

impl Solver for Egm {
    fn name(&self) -> &'static str {
        "egm"
    }

    fn solve(
        &self,
        problem: &ProblemInstance,
        x0: &Vector,
        stop: &StopRule,
    ) -> Result<SolveOutcome, ParamError> {
        check_dim(problem, x0)?;
        let mut ctl = LoopControl::new();
        let mut x = x0.clone();
        for j in 0..stop.max_iters {
            let b_x = problem.eval(&x);
            if !b_x.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let residual = natural_residual_with(&x, &b_x, problem.set());
            let extra = extra_metrics_at(problem, &x);
            let (y, x_next) = egm_update(&x, &b_x, problem, self.lambda);
            if !x_next.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let record = IterationRecord {
                j,
                residual,
                gap_xw: x.distance(&y),
                lambda: self.lambda,
                elapsed: 0.0,
                extra,
            };
            if let Some(outcome) = ctl.record(record, &x, stop) {
                return Ok(outcome);
            }
            x = x_next;
        }
        Ok(ctl.finish(x, StopReason::MaxIters))
    }
}

// ---------------------------------------------------------------------------
// Popov

/// One step of the single-evaluation method:
/// `y = P_C(x - lambda B(x))`, `x_next = P_C(y - lambda B(x))`, reusing the
/// one evaluation `B(x)` in both projections. Returns `(x_next, y)`; the
/// warm-start argument seeds the predictor chain at `y_prev = x_0` and is
/// not consumed by the update itself.
pub fn popov_step(
    x: &Vector,
    _y_prev: &Vector,
    problem: &ProblemInstance,
    lambda: f64,
) -> (Vector, Vector) {
    let b_x = problem.eval(x);
    popov_update(x, &b_x, problem, lambda)
}

fn popov_update(
    x: &Vector,
    b_x: &Vector,
    problem: &ProblemInstance,
    lambda: f64,
) -> (Vector, Vector) {
    let y = problem.project(&x.combine(1.0, b_x, -lambda));
    let x_next = problem.project(&y.combine(1.0, b_x, -lambda));
    (x_next, y)
}

/// Popov's method (one operator evaluation per iteration), registered as
/// `popov`.
#[derive(Clone, Debug)]
pub struct Popov {
    lambda: f64,
}

impl Popov {
    pub fn new(lambda: f64) -> Result<Self, ParamError> {
        require_positive("lambda", lambda)?;
        Ok(Popov { lambda })
    }

    /// Default step `0.9 / (3L)`; admissibility `lambda < 1/(3L)` enforced
    /// when a hint exists.
    pub fn for_problem(problem: &ProblemInstance, lambda: Option<f64>) -> Result<Self, ParamError> {
        let lambda = resolve_step("popov", problem, lambda, 0.3)?;
        check_step_bound("popov", lambda, 1.0 / 3.0, problem)?;
        Popov::new(lambda)
    }
}

impl Solver for Popov {
    fn name(&self) -> &'static str {
        "popov"
    }

    fn solve(
        &self,
        problem: &ProblemInstance,
        x0: &Vector,
        stop: &StopRule,
    ) -> Result<SolveOutcome, ParamError> {
        check_dim(problem, x0)?;
        let mut ctl = LoopControl::new();
        let mut x = x0.clone();
        for j in 0..stop.max_iters {
            let b_x = problem.eval(&x);
            if !b_x.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let residual = natural_residual_with(&x, &b_x, problem.set());
            let extra = extra_metrics_at(problem, &x);
            let (x_next, y) = popov_update(&x, &b_x, problem, self.lambda);
            if !x_next.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let record = IterationRecord {
                j,
                residual,
                gap_xw: x.distance(&y),
                lambda: self.lambda,
                elapsed: 0.0,
                extra,
            };
            if let Some(outcome) = ctl.record(record, &x, stop) {
                return Ok(outcome);
            }
            x = x_next;
        }
        Ok(ctl.finish(x, StopReason::MaxIters))
    }
}

// ---------------------------------------------------------------------------
// SEGM

/// One subgradient extragradient step: `y = P_C(x - lambda B(x))`, then a
/// closed-form projection onto the supporting half-space of `C` at `y`:
/// `x_next = P_T(x - lambda B(y))`.
pub fn segm_step(x: &Vector, problem: &ProblemInstance, lambda: f64) -> Vector {
    let b_x = problem.eval(x);
    segm_update(x, &b_x, problem, lambda).1
}

fn segm_update(
    x: &Vector,
    b_x: &Vector,
    problem: &ProblemInstance,
    lambda: f64,
) -> (Vector, Vector) {
    let pre = x.combine(1.0, b_x, -lambda);
    let y = problem.project(&pre);
    let halfspace = supporting_halfspace(&pre, &y);
    let b_y = problem.eval(&y);
    let x_next = project_halfspace(&x.combine(1.0, &b_y, -lambda), &halfspace);
    (y, x_next)
}

/// Subgradient extragradient method with fixed step, registered as `segm`.
#[derive(Clone, Debug)]
pub struct Segm {
    lambda: f64,
}

impl Segm {
    pub fn new(lambda: f64) -> Result<Self, ParamError> {
        require_positive("lambda", lambda)?;
        Ok(Segm { lambda })
    }

    pub fn for_problem(problem: &ProblemInstance, lambda: Option<f64>) -> Result<Self, ParamError> {
        let lambda = resolve_step("segm", problem, lambda, 0.9)?;
        check_step_bound("segm", lambda, 1.0, problem)?;
        Segm::new(lambda)
    }
}

impl Solver for Segm {
    fn name(&self) -> &'static str {
        "segm"
    }

    fn solve(
        &self,
        problem: &ProblemInstance,
        x0: &Vector,
        stop: &StopRule,
    ) -> Result<SolveOutcome, ParamError> {
        check_dim(problem, x0)?;
        let mut ctl = LoopControl::new();
        let mut x = x0.clone();
        for j in 0..stop.max_iters {
            let b_x = problem.eval(&x);
            if !b_x.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let residual = natural_residual_with(&x, &b_x, problem.set());
            let extra = extra_metrics_at(problem, &x);
            let (y, x_next) = segm_update(&x, &b_x, problem, self.lambda);
            if !x_next.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let record = IterationRecord {
                j,
                residual,
                gap_xw: x.distance(&y),
                lambda: self.lambda,
                elapsed: 0.0,
                extra,
            };
            if let Some(outcome) = ctl.record(record, &x, stop) {
                return Ok(outcome);
            }
            x = x_next;
        }
        Ok(ctl.finish(x, StopReason::MaxIters))
    }
}

// ---------------------------------------------------------------------------
// Yang et al.

/// One step of the self-adaptive SEGM baseline. Returns `(x_next, alpha_next)`
/// with the step update
/// `alpha_next = min(mu (||x-y||^2 + ||x_next-y||^2) / (2 <B(x)-B(y), x_next-y>), alpha)`
/// when the pairing is positive, else `alpha`.
pub fn yang_step(x: &Vector, problem: &ProblemInstance, alpha: f64, mu: f64) -> (Vector, f64) {
    let b_x = problem.eval(x);
    let (_, x_next, alpha_next) = yang_update(x, &b_x, problem, alpha, mu);
    (x_next, alpha_next)
}

fn yang_update(
    x: &Vector,
    b_x: &Vector,
    problem: &ProblemInstance,
    alpha: f64,
    mu: f64,
) -> (Vector, Vector, f64) {
    let pre = x.combine(1.0, b_x, -alpha);
    let y = problem.project(&pre);
    let halfspace = supporting_halfspace(&pre, &y);
    let b_y = problem.eval(&y);
    let x_next = project_halfspace(&x.combine(1.0, &b_y, -alpha), &halfspace);
    let pairing = (b_x - &b_y).dot(&(&x_next - &y));
    let alpha_next = if pairing > 0.0 {
        (mu * (x.distance(&y).powi(2) + x_next.distance(&y).powi(2)) / (2.0 * pairing)).min(alpha)
    } else {
        alpha
    };
    (y, x_next, alpha_next)
}

/// Yang et al.'s self-adaptive subgradient extragradient baseline,
/// registered as `yang`.
#[derive(Clone, Debug)]
pub struct Yang {
    lambda0: f64,
    mu: f64,
}

impl Yang {
    pub fn new(lambda0: f64, mu: f64) -> Result<Self, ParamError> {
        require_positive("lambda0", lambda0)?;
        if mu <= 0.0 || mu >= 1.0 || mu.is_nan() {
            return Err(ParamError::MuOutOfRange(mu));
        }
        Ok(Yang { lambda0, mu })
    }
}

impl Solver for Yang {
    fn name(&self) -> &'static str {
        "yang"
    }

    fn solve(
        &self,
        problem: &ProblemInstance,
        x0: &Vector,
        stop: &StopRule,
    ) -> Result<SolveOutcome, ParamError> {
        check_dim(problem, x0)?;
        let mut ctl = LoopControl::new();
        let mut x = x0.clone();
        let mut alpha = self.lambda0;
        for j in 0..stop.max_iters {
            let b_x = problem.eval(&x);
            if !b_x.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let residual = natural_residual_with(&x, &b_x, problem.set());
            let extra = extra_metrics_at(problem, &x);
            let (y, x_next, alpha_next) = yang_update(&x, &b_x, problem, alpha, self.mu);
            if !x_next.is_finite() || !alpha_next.is_finite() {
                return Ok(ctl.finish(x, StopReason::NonFinite));
            }
            let record = IterationRecord {
                j,
                residual,
                gap_xw: x.distance(&y),
                lambda: alpha,
                elapsed: 0.0,
                extra,
            };
            if let Some(outcome) = ctl.record(record, &x, stop) {
                return Ok(outcome);
            }
            x = x_next;
            alpha = alpha_next;
        }
        Ok(ctl.finish(x, StopReason::MaxIters))
    }
}

fn check_dim(problem: &ProblemInstance, x0: &Vector) -> Result<(), ParamError> {
    if x0.dim() != problem.dim() {
        Err(ParamError::DimensionMismatch {
            expected: problem.dim(),
            got: x0.dim(),
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vip_core::{FeasibleSet, OperatorSpec};

    fn identity_on_orthant() -> ProblemInstance {
        ProblemInstance::new(
            1,
            OperatorSpec::new("identity", |x: &Vector| x.clone()),
            FeasibleSet::nonneg_orthant(),
        )
    }

    fn zero_operator(dim: usize, set: FeasibleSet) -> ProblemInstance {
        ProblemInstance::new(
            dim,
            OperatorSpec::new("zero", |x: &Vector| Vector::zeros(x.dim())),
            set,
        )
    }

    #[test]
    fn egm_hand_step() {
        // 1-dim, C = R_+, B(x) = x, x = 1, lambda = 0.5:
        // y = P(0.5) = 0.5, x_next = P(1 - 0.25) = 0.75.
        let p = identity_on_orthant();
        let x = Vector::from_slice(&[1.0]);
        assert_eq!(egm_step(&x, &p, 0.5).as_slice(), &[0.75]);
    }

    #[test]
    fn egm_zero_operator_projects() {
        let p = zero_operator(2, FeasibleSet::nonneg_orthant());
        let x = Vector::from_slice(&[-3.0, 4.0]);
        assert_eq!(egm_step(&x, &p, 0.7).as_slice(), &[0.0, 4.0]);
    }

    #[test]
    fn egm_fixed_point_at_solution() {
        // x* = 0 solves B(x) = x on R_+; the step keeps it.
        let p = identity_on_orthant();
        assert_eq!(egm_step(&Vector::zeros(1), &p, 0.5).as_slice(), &[0.0]);
    }

    #[test]
    fn popov_hand_step() {
        // y = P(1 - 0.25) = 0.75, x_next = P(0.75 - 0.25) = 0.5.
        let p = identity_on_orthant();
        let x = Vector::from_slice(&[1.0]);
        let (x_next, y) = popov_step(&x, &x, &p, 0.25);
        assert_eq!(y.as_slice(), &[0.75]);
        assert_eq!(x_next.as_slice(), &[0.5]);
    }

    #[test]
    fn popov_zero_operator() {
        let p = zero_operator(2, FeasibleSet::ball(1.0));
        let x = Vector::from_slice(&[3.0, 0.0]);
        let (x_next, y) = popov_step(&x, &x, &p, 0.5);
        assert_eq!(y.as_slice(), &[1.0, 0.0]);
        assert_eq!(x_next.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn segm_hand_step() {
        // y = 0.5; the half-space normal (1 - 0.5) - 0.5 = 0 degenerates,
        // so x_next = 1 - 0.5*0.5 = 0.75.
        let p = identity_on_orthant();
        let x = Vector::from_slice(&[1.0]);
        assert_eq!(segm_step(&x, &p, 0.5).as_slice(), &[0.75]);
    }

    #[test]
    fn segm_equals_egm_minus_projection_on_whole_space() {
        // On the whole space the half-space is degenerate and SEGM reduces
        // to x - lambda B(y) with no second projection.
        let p = zero_operator(2, FeasibleSet::whole_space())
            .with_operator(OperatorSpec::new("affine", |x: &Vector| {
                Vector::from_slice(&[0.8 * x[0] + 0.1 * x[1], -0.2 * x[0] + 0.5 * x[1]])
            }));
        let x = Vector::from_slice(&[1.0, -2.0]);
        let lambda = 0.3;
        let segm_next = segm_step(&x, &p, lambda);
        let b_x = p.eval(&x);
        let y = x.combine(1.0, &b_x, -lambda);
        let expected = x.combine(1.0, &p.eval(&y), -lambda);
        assert_eq!(segm_next.as_slice(), expected.as_slice());
        // And EGM agrees exactly on the whole space.
        assert_eq!(egm_step(&x, &p, lambda).as_slice(), expected.as_slice());
    }

    #[test]
    fn yang_hand_step() {
        // y = 0.5, degenerate half-space, x_next = 0.75; the pairing is
        // 0.5 * 0.25 = 0.125 > 0 and the candidate step
        // 0.5*(0.25 + 0.0625)/0.25 = 0.625 exceeds alpha, so alpha stays.
        let p = identity_on_orthant();
        let x = Vector::from_slice(&[1.0]);
        let (x_next, alpha_next) = yang_step(&x, &p, 0.5, 0.5);
        assert_eq!(x_next.as_slice(), &[0.75]);
        assert_eq!(alpha_next, 0.5);
    }

    #[test]
    fn yang_zero_operator_keeps_alpha() {
        let p = zero_operator(2, FeasibleSet::ball(2.0));
        let x = Vector::from_slice(&[3.0, 0.0]);
        let (x_next, alpha_next) = yang_step(&x, &p, 0.4, 0.5);
        assert_eq!(x_next.as_slice(), &[2.0, 0.0]);
        assert_eq!(alpha_next, 0.4);
    }

    #[test]
    fn step_bound_enforced_with_hint() {
        let p = identity_on_orthant().with_operator(
            OperatorSpec::new("identity", |x: &Vector| x.clone()).with_lipschitz_hint(1.0),
        );
        assert!(matches!(
            Egm::for_problem(&p, Some(1.5)),
            Err(ParamError::StepTooLarge { .. })
        ));
        assert!(matches!(
            Popov::for_problem(&p, Some(0.5)),
            Err(ParamError::StepTooLarge { .. })
        ));
        // Defaults derived from the hint are admissible.
        assert!((Egm::for_problem(&p, None).unwrap().lambda() - 0.9).abs() < 1e-15);
        assert!(Popov::for_problem(&p, None).is_ok());
    }

    #[test]
    fn step_required_without_hint() {
        let p = identity_on_orthant();
        assert!(matches!(
            Segm::for_problem(&p, None),
            Err(ParamError::StepRequired { .. })
        ));
    }
}
