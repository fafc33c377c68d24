use serde::{Deserialize, Serialize};

use crate::ParamError;

/// Power-law sequence `j -> c / (a*j + b)^p`. Covers both control sequences
/// of the adaptive solver: the anchor weights (vanishing, non-summable) and
/// the direction-momentum coefficients (summable).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSchedule {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

/// Convenience constructor mirroring the schedule's written form.
pub fn power_schedule(c: f64, a: f64, b: f64, p: f64) -> PowerSchedule {
    PowerSchedule { c, a, b, p }
}

impl PowerSchedule {
    pub fn value(&self, j: u64) -> f64 {
        self.c / (self.a * j as f64 + self.b).powf(self.p)
    }

    /// Anchor-weight role: values must stay in (0,1), vanish, and sum to
    /// infinity. Accepts exactly the family `1/(a*j + b)^p` with `a > 0`,
    /// `b > 1`, `p` in `(0,1]`.
    pub fn validate_anchor_role(&self) -> Result<(), ParamError> {
        let reject = |msg: String| Err(ParamError::BadAnchorSchedule(msg));
        if self.c != 1.0 {
            return reject(format!("numerator must be 1, got {}", self.c));
        }
        if self.a <= 0.0 || !self.a.is_finite() {
            return reject(format!("a must be positive, got {}", self.a));
        }
        if self.p <= 0.0 || self.p > 1.0 || self.p.is_nan() {
            return reject(format!("p must lie in (0,1], got {}", self.p));
        }
        // b > 1 keeps the j = 0 value strictly below 1.
        if self.b <= 1.0 || !self.b.is_finite() {
            return reject(format!(
                "b must exceed 1 so values stay below 1, got {}",
                self.b
            ));
        }
        Ok(())
    }

    /// Momentum role: nonnegative and summable. Accepts exactly the family
    /// `c/(j+1)^p` with `c >= 0` and `p > 1`.
    pub fn validate_momentum_role(&self) -> Result<(), ParamError> {
        let reject = |msg: String| Err(ParamError::BadMomentumSchedule(msg));
        if self.a != 1.0 || self.b != 1.0 {
            return reject(format!(
                "denominator must be (j+1), got ({}*j + {})",
                self.a, self.b
            ));
        }
        if self.c < 0.0 || !self.c.is_finite() {
            return reject(format!("c must be nonnegative, got {}", self.c));
        }
        if self.p <= 1.0 || self.p.is_nan() {
            return reject(format!("p must exceed 1 for summability, got {}", self.p));
        }
        Ok(())
    }
}
