use std::fmt;
use std::sync::Arc;

use crate::operator::OperatorSpec;
use crate::sets::FeasibleSet;
use crate::vector::Vector;

type MetricFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// A problem-specific scalar metric recorded alongside each iterate, e.g.
/// the duality gap of a matrix game.
#[derive(Clone)]
pub struct ExtraMetric {
    name: Arc<str>,
    eval: MetricFn,
}

impl ExtraMetric {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ExtraMetric {
            name: name.into().into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Cheap-to-clone handle on the name, for per-iteration records.
    pub fn shared_name(&self) -> Arc<str> {
        Arc::clone(&self.name)
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        (self.eval)(x)
    }
}

impl fmt::Debug for ExtraMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtraMetric")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// A VIP instance: operator evaluation rule, feasible-set projection rule,
/// and dimension. Immutable after construction.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    dim: usize,
    operator: OperatorSpec,
    set: FeasibleSet,
    extra_metrics: Vec<ExtraMetric>,
}

impl ProblemInstance {
    pub fn new(dim: usize, operator: OperatorSpec, set: FeasibleSet) -> Self {
        assert!(dim >= 1, "problem dimension must be >= 1");
        ProblemInstance {
            dim,
            operator,
            set,
            extra_metrics: Vec::new(),
        }
    }

    pub fn with_extra_metric(mut self, metric: ExtraMetric) -> Self {
        self.extra_metrics.push(metric);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operator(&self) -> &OperatorSpec {
        &self.operator
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn extra_metrics(&self) -> &[ExtraMetric] {
        &self.extra_metrics
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        self.operator.eval(x)
    }

    pub fn project(&self, u: &Vector) -> Vector {
        self.set.project(u)
    }

    /// Swaps in another operator, keeping set and metrics. Used to attach
    /// instrumented operators in tests.
    pub fn with_operator(mut self, operator: OperatorSpec) -> Self {
        self.operator = operator;
        self
    }
}

/// Natural residual `||x - P_C(x - B(x))||`: zero exactly at VIP solutions,
/// used as the primary stopping metric.
pub fn natural_residual(x: &Vector, problem: &ProblemInstance) -> f64 {
    natural_residual_with(x, &problem.eval(x), problem.set())
}

/// Natural residual with a precomputed operator value `b_x = B(x)`. Solver
/// loops call this to reuse an evaluation they already paid for.
pub fn natural_residual_with(x: &Vector, b_x: &Vector, set: &FeasibleSet) -> f64 {
    x.distance(&set.project(&(x - b_x)))
}
