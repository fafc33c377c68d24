use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::vector::Vector;

type EvalFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// An operator `B : R^d -> R^d` given by an evaluation rule, an optional
/// Lipschitz constant, and a label. Evaluation must be deterministic: the
/// same input yields bitwise-identical output.
#[derive(Clone)]
pub struct OperatorSpec {
    label: String,
    eval: EvalFn,
    lipschitz_hint: Option<f64>,
    counter: Option<Arc<AtomicU64>>,
}

impl OperatorSpec {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        OperatorSpec {
            label: label.into(),
            eval: Arc::new(eval),
            lipschitz_hint: None,
            counter: None,
        }
    }

    pub fn with_lipschitz_hint(mut self, l: f64) -> Self {
        assert!(l > 0.0, "lipschitz hint must be positive");
        self.lipschitz_hint = Some(l);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lipschitz_hint(&self) -> Option<f64> {
        self.lipschitz_hint
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        if let Some(c) = &self.counter {
            c.fetch_add(1, Ordering::Relaxed);
        }
        (self.eval)(x)
    }

    /// Returns a copy whose evaluations are counted, plus the shared counter.
    /// Used by operator-call-budget tests.
    pub fn instrumented(&self) -> (OperatorSpec, EvalCounter) {
        let counter = Arc::new(AtomicU64::new(0));
        let mut spec = self.clone();
        spec.counter = Some(Arc::clone(&counter));
        (spec, EvalCounter(counter))
    }
}

impl fmt::Debug for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorSpec")
            .field("label", &self.label)
            .field("lipschitz_hint", &self.lipschitz_hint)
            .finish_non_exhaustive()
    }
}

/// Shared evaluation counter attached by [`OperatorSpec::instrumented`].
#[derive(Clone, Debug)]
pub struct EvalCounter(Arc<AtomicU64>);

impl EvalCounter {
    pub fn count(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}
