use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

/// Dense finite-dimensional real vector. The iterate/direction carrier for
/// every solver in the workspace.
///
/// Construction rejects NaN and infinite entries; binary operations require
/// matching dimensions.
#[derive(Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Wraps raw entries. Panics if any entry is NaN or infinite.
    pub fn new(entries: Vec<f64>) -> Self {
        assert!(
            entries.iter().all(|v| v.is_finite()),
            "vector entries must be finite"
        );
        Vector(entries)
    }

    /// Wraps entries without the finiteness check. For operator kernels on
    /// a divergence path, where the solver's guard inspects `is_finite`
    /// afterwards instead of panicking mid-evaluation.
    pub fn from_raw(entries: Vec<f64>) -> Self {
        Vector(entries)
    }

    pub fn from_slice(entries: &[f64]) -> Self {
        Self::new(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// All entries set to `value`.
    pub fn constant(dim: usize, value: f64) -> Self {
        Self::new(vec![value; dim])
    }

    pub fn ones(dim: usize) -> Self {
        Vector(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in distance");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `alpha * self + beta * other` in one pass.
    pub fn combine(&self, alpha: f64, other: &Vector, beta: f64) -> Vector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in combine");
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Concatenates two blocks; used for product-space iterates.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Vector(v)
    }

    /// Splits into `(self[..k], self[k..])`.
    pub fn split_at(&self, k: usize) -> (Vector, Vector) {
        assert!(k <= self.dim());
        (Vector(self.0[..k].to_vec()), Vector(self.0[k..].to_vec()))
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Vector").field(&self.0).finish()
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.combine(1.0, rhs, 1.0)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.combine(1.0, rhs, -1.0)
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        self.scale(s)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector::new(v)
    }
}
