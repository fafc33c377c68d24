use std::sync::Arc;

/// One row of a solve trace. `residual` and `extra` are measured at the
/// iterate `x_j` the iteration started from; `gap_xw` is the distance from
/// `x_j` to the predictor point of the same iteration; `lambda` is the step
/// used; `elapsed` is seconds since the solve started (monotonic clock).
///
/// Extra-metric names are shared `Arc<str>`s: long game runs hold hundreds
/// of thousands of records.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub j: u64,
    pub residual: f64,
    pub gap_xw: f64,
    pub lambda: f64,
    pub elapsed: f64,
    pub extra: Vec<(Arc<str>, f64)>,
}

impl IterationRecord {
    pub fn is_finite(&self) -> bool {
        self.residual.is_finite()
            && self.gap_xw.is_finite()
            && self.lambda.is_finite()
            && self.elapsed.is_finite()
            && self.extra.iter().all(|(_, v)| v.is_finite())
    }
}
