use std::sync::Arc;

use thiserror::Error;
use vip_core::{
    project_simplex, ExtraMetric, FeasibleSet, OperatorSpec, ProblemInstance, SplitMix64, Vector,
};

use crate::matrix::DenseMatrix;

/// How house wealth is assigned.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WealthMode {
    /// `w_i` drawn uniform on `[1, 2]` with the given seed.
    SeededUniform(u64),
    /// Every house holds the same wealth.
    Constant(f64),
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("duality gap needs strategies on their simplices (block sum error {0:.3e})")]
    InfeasibleStrategy(f64),
    #[error("strategy dimension {got} does not match the {expected}-house game")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Payoff matrix `Phi_ij = w_i (1 - exp(-alpha * |pos_i - pos_j|))`: the
/// burglar's expected profit for attacking house `i` while the policeman
/// guards house `j`.
pub fn build_payoff(wealth: &Vector, alpha: f64, positions: &Vector) -> DenseMatrix {
    assert!(alpha > 0.0, "distance decay must be positive");
    assert!(
        wealth.iter().all(|&w| w > 0.0),
        "house wealth must be positive"
    );
    assert_eq!(wealth.dim(), positions.dim());
    DenseMatrix::from_fn(wealth.dim(), wealth.dim(), |i, j| {
        let dist = (positions[i] - positions[j]).abs();
        wealth[i] * (1.0 - (-alpha * dist).exp())
    })
}

/// First-order saddle operator of `min_u max_v v^T Phi u` on the product of
/// simplices: `F(u, v) = (Phi^T v, -Phi u)` on the stacked vector `(u, v)`.
pub fn game_operator(z: &Vector, payoff: &DenseMatrix) -> Vector {
    let n = payoff.rows();
    assert_eq!(
        z.dim(),
        2 * n,
        "stacked strategy vector must have dimension 2n"
    );
    let (u, v) = z.split_at(n);
    payoff.matvec_transpose(&v).concat(&(-&payoff.matvec(&u)))
}

/// Saddle-point certificate `max_i (Phi u)_i - min_j (Phi^T v)_j`:
/// nonnegative everywhere on the product of simplices and zero exactly at
/// equilibria. Rejects strategies that are not (near-)feasible.
pub fn duality_gap(u: &Vector, v: &Vector, payoff: &DenseMatrix) -> Result<f64, GameError> {
    let n = payoff.rows();
    if u.dim() != n || v.dim() != n {
        return Err(GameError::DimensionMismatch {
            expected: n,
            got: u.dim().max(v.dim()),
        });
    }
    const FEAS_TOL: f64 = 1e-8;
    for block in [u, v] {
        let sum: f64 = block.iter().sum();
        let neg = block.iter().cloned().fold(0.0_f64, |acc, x| acc.min(x));
        let err = (sum - 1.0).abs().max(-neg);
        if err > FEAS_TOL {
            return Err(GameError::InfeasibleStrategy(err));
        }
    }
    let best_attack = payoff
        .matvec(u)
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let best_guard = payoff
        .matvec_transpose(v)
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(best_attack - best_guard)
}

/// The policeman-burglar matrix game as a VIP on `simplex x simplex`.
/// Houses sit on a line at unit (configurable) spacing.
#[derive(Clone, Debug)]
pub struct GameProblem {
    houses: usize,
    payoff: Arc<DenseMatrix>,
    wealth: Vector,
    lipschitz: f64,
}

impl GameProblem {
    pub fn new(houses: usize, alpha: f64, spacing: f64, wealth_mode: WealthMode) -> Self {
        assert!(houses >= 1);
        assert!(spacing > 0.0);
        let wealth = match wealth_mode {
            WealthMode::SeededUniform(seed) => {
                let mut rng = SplitMix64::new(seed);
                Vector::new((0..houses).map(|_| rng.next_range(1.0, 2.0)).collect())
            }
            WealthMode::Constant(w) => {
                assert!(w > 0.0);
                Vector::constant(houses, w)
            }
        };
        let positions = Vector::new((0..houses).map(|i| i as f64 * spacing).collect());
        let payoff = build_payoff(&wealth, alpha, &positions);
        // The stacked operator matrix [[0, Phi^T], [-Phi, 0]] has spectral
        // norm equal to Phi's largest singular value.
        let lipschitz = payoff.spectral_norm();
        GameProblem {
            houses,
            payoff: Arc::new(payoff),
            wealth,
            lipschitz,
        }
    }

    pub fn houses(&self) -> usize {
        self.houses
    }

    /// Joint dimension of the stacked strategy vector.
    pub fn dim(&self) -> usize {
        2 * self.houses
    }

    pub fn payoff(&self) -> &DenseMatrix {
        &self.payoff
    }

    pub fn wealth(&self) -> &Vector {
        &self.wealth
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn operator(&self) -> OperatorSpec {
        let payoff = Arc::clone(&self.payoff);
        OperatorSpec::new("game", move |z: &Vector| game_operator(z, &payoff))
            .with_lipschitz_hint(self.lipschitz)
    }

    /// Blockwise simplex projection on the stacked vector.
    pub fn feasible_set(&self) -> FeasibleSet {
        let n = self.houses;
        FeasibleSet::new(
            format!("simplex^2(n={n})"),
            move |z: &Vector| {
                let (u, v) = z.split_at(n);
                project_simplex(&u).concat(&project_simplex(&v))
            },
            move |z: &Vector, tol: f64| {
                let (u, v) = z.split_at(n);
                [u, v].iter().all(|block| {
                    let sum: f64 = block.iter().sum();
                    (sum - 1.0).abs() <= tol && block.iter().all(|&x| x >= -tol)
                })
            },
        )
    }

    pub fn instance(&self) -> ProblemInstance {
        let n = self.houses;
        let payoff = Arc::clone(&self.payoff);
        // Half-space-projected iterates sit slightly outside the product
        // simplex, so the per-iteration certificate is computed for the
        // projected strategy profile.
        let gap = ExtraMetric::new("gap_duality", move |z: &Vector| {
            let (u, v) = z.split_at(n);
            let (u, v) = (project_simplex(&u), project_simplex(&v));
            duality_gap(&u, &v, &payoff).unwrap_or(f64::NAN)
        });
        ProblemInstance::new(self.dim(), self.operator(), self.feasible_set())
            .with_extra_metric(gap)
    }
}
