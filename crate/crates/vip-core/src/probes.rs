use thiserror::Error;

use crate::operator::OperatorSpec;
use crate::vector::Vector;

/// Slack applied to the sign checks below; problem data across the bench
/// suite is O(1)-scaled so an absolute tolerance is appropriate.
const SIGN_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(
        "lipschitz estimate requires distinct points in each pair (pair {index} is degenerate)"
    )]
    IdenticalPair { index: usize },
    #[error("lipschitz estimate requires at least one sample pair")]
    NoSamples,
}

/// Checks `<x - y, B(x) - B(y)> >= 0` on every sampled pair (with slack).
pub fn probe_monotone(op: &OperatorSpec, samples: &[(Vector, Vector)]) -> bool {
    samples.iter().all(|(x, y)| {
        let diff = x - y;
        diff.dot(&(&op.eval(x) - &op.eval(y))) >= -SIGN_TOL
    })
}

/// Checks pseudomonotonicity in the standard form: for each ordered pair
/// `(x, y)`, `<B(y), x - y> >= 0` implies `<B(x), x - y> >= 0` (with slack).
pub fn probe_pseudomonotone(op: &OperatorSpec, samples: &[(Vector, Vector)]) -> bool {
    samples.iter().all(|(x, y)| {
        let diff = x - y;
        let premise = op.eval(y).dot(&diff) >= -SIGN_TOL;
        !premise || op.eval(x).dot(&diff) >= -SIGN_TOL
    })
}

/// Largest observed ratio `||B(x) - B(y)|| / ||x - y||` over the sample
/// pairs: a lower bound on the Lipschitz constant, exact for linear maps
/// when the pairs span the top singular direction.
pub fn estimate_lipschitz(
    op: &OperatorSpec,
    samples: &[(Vector, Vector)],
) -> Result<f64, ProbeError> {
    if samples.is_empty() {
        return Err(ProbeError::NoSamples);
    }
    let mut best = 0.0_f64;
    for (index, (x, y)) in samples.iter().enumerate() {
        let denom = x.distance(y);
        if denom == 0.0 {
            return Err(ProbeError::IdenticalPair { index });
        }
        best = best.max(op.eval(x).distance(&op.eval(y)) / denom);
    }
    Ok(best)
}
