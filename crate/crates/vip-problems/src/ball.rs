use vip_core::{FeasibleSet, OperatorSpec, ProblemInstance, Vector};

/// Ball-constrained pseudomonotone instance: `B(x) = (7 - ||x||) x` on
/// `{ ||x|| <= radius }` with the benchmark radius 5.
///
/// The operator vanishes only at the origin and on the sphere `||x|| = 7`
/// (outside the feasible ball), so the VIP has the unique solution
/// `x* = 0`. It is pseudomonotone but not monotone, with Lipschitz
/// constant 11 on the region the solvers visit.
#[derive(Clone, Debug)]
pub struct BallProblem {
    dim: usize,
    radius: f64,
}

/// Growth-rate shift in the operator; the benchmark value.
const SHIFT: f64 = 7.0;
const BENCH_RADIUS: f64 = 5.0;
const BENCH_LIPSCHITZ: f64 = 11.0;

impl BallProblem {
    pub fn new(dim: usize) -> Self {
        Self::with_radius(dim, BENCH_RADIUS)
    }

    pub fn with_radius(dim: usize, radius: f64) -> Self {
        assert!(dim >= 1);
        assert!(radius > 0.0);
        BallProblem { dim, radius }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn operator(&self) -> OperatorSpec {
        let op = OperatorSpec::new("ball", |x: &Vector| x.scale(SHIFT - x.norm()));
        if self.radius == BENCH_RADIUS {
            op.with_lipschitz_hint(BENCH_LIPSCHITZ)
        } else {
            op
        }
    }

    pub fn instance(&self) -> ProblemInstance {
        ProblemInstance::new(self.dim, self.operator(), FeasibleSet::ball(self.radius))
    }
}
