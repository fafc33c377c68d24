//! The three benchmark problem instances used by the solver harness:
//!
//! * [`SunProblem`] — a nonlinear VIP on the nonnegative orthant combining
//!   a componentwise quadratic map with a banded affine term.
//! * [`BallProblem`] — the pseudomonotone (not monotone) operator
//!   `(7 - ||x||) x` on the radius-5 ball; unique solution at the origin.
//! * [`GameProblem`] — a policeman-burglar matrix game as a saddle-point
//!   VIP on a product of probability simplices, with a duality-gap
//!   certificate.

mod ball;
mod game;
mod matrix;
mod sun;

pub use ball::BallProblem;
pub use game::{build_payoff, duality_gap, game_operator, GameError, GameProblem, WealthMode};
pub use matrix::DenseMatrix;
pub use sun::SunProblem;
