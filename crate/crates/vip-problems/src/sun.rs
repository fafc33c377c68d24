use vip_core::{FeasibleSet, OperatorSpec, ProblemInstance, Vector};

use crate::matrix::DenseMatrix;

/// Sun's nonlinear VIP on the nonnegative orthant:
/// `B(x) = B1(x) + D x + c` with
/// `B1(x)_i = x_i^2 + x_i + x_{i-1} x_i + x_i x_{i+1}` (boundary terms
/// zero), `D` the banded matrix with 4 on the diagonal, 1 on the first
/// subdiagonal and -2 on the first superdiagonal, and `c = (-1,...,-1)`.
///
/// The quadratic part is only locally Lipschitz, so the instance carries no
/// global Lipschitz hint; fixed-step baselines need an explicit step.
#[derive(Clone, Debug)]
pub struct SunProblem {
    dim: usize,
}

impl SunProblem {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        SunProblem { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The affine part's matrix `D`.
    pub fn d_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.dim, self.dim, |i, j| {
            if i == j {
                4.0
            } else if i == j + 1 {
                1.0
            } else if j == i + 1 {
                -2.0
            } else {
                0.0
            }
        })
    }

    pub fn operator(&self) -> OperatorSpec {
        let dim = self.dim;
        OperatorSpec::new("sun", move |x: &Vector| sun_operator_impl(x, dim))
    }

    pub fn instance(&self) -> ProblemInstance {
        ProblemInstance::new(self.dim, self.operator(), FeasibleSet::nonneg_orthant())
    }
}

fn sun_operator_impl(x: &Vector, dim: usize) -> Vector {
    assert_eq!(x.dim(), dim, "sun operator dimension mismatch");
    let xs = x.as_slice();
    let at = |i: isize| -> f64 {
        if i < 0 || i >= dim as isize {
            0.0
        } else {
            xs[i as usize]
        }
    };
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim as isize {
        let xi = at(i);
        // Componentwise quadratic part.
        let b1 = xi * xi + xi + at(i - 1) * xi + xi * at(i + 1);
        // Banded affine part D x + c, written out so the evaluation stays
        // O(d) instead of a dense matvec.
        let b2 = 4.0 * xi + at(i - 1) - 2.0 * at(i + 1) - 1.0;
        out.push(b1 + b2);
    }
    Vector::from_raw(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_constant_term() {
        let p = SunProblem::new(4);
        let b = p.operator().eval(&Vector::zeros(4));
        assert_eq!(b.as_slice(), &[-1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn hand_value_dim2_ones() {
        // d = 2, x = (1,1): B1 = (3,3), Dx = (2,5), c = (-1,-1).
        let p = SunProblem::new(2);
        let b = p.operator().eval(&Vector::ones(2));
        assert_eq!(b.as_slice(), &[4.0, 7.0]);
    }

    #[test]
    fn hand_value_dim3_basis() {
        // d = 3, x = e1: B1 = (2,0,0), Dx = (4,1,0), c = (-1,-1,-1).
        let p = SunProblem::new(3);
        let b = p.operator().eval(&Vector::from_slice(&[1.0, 0.0, 0.0]));
        assert_eq!(b.as_slice(), &[5.0, 0.0, -1.0]);
    }

    #[test]
    fn banded_eval_matches_dense_matvec() {
        // The O(d) evaluation of the affine part agrees with D x + c.
        let p = SunProblem::new(7);
        let d = p.d_matrix();
        let x = Vector::from_slice(&[0.3, -0.1, 0.8, 0.0, 1.2, -0.5, 0.9]);
        let full = p.operator().eval(&x);
        let xs = x.as_slice();
        let affine = d.matvec(&x);
        for i in 0..7 {
            let prev = if i == 0 { 0.0 } else { xs[i - 1] };
            let next = if i == 6 { 0.0 } else { xs[i + 1] };
            let b1 = xs[i] * xs[i] + xs[i] + prev * xs[i] + xs[i] * next;
            let expected = b1 + affine[i] - 1.0;
            assert!((full[i] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn d_matrix_band_pattern() {
        let d = SunProblem::new(4).d_matrix();
        assert_eq!(d.get(2, 2), 4.0);
        assert_eq!(d.get(2, 1), 1.0);
        assert_eq!(d.get(1, 2), -2.0);
        assert_eq!(d.get(0, 3), 0.0);
        assert_eq!(d.get(3, 0), 0.0);
    }
}
