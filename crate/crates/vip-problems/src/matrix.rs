use vip_core::Vector;

/// Dense row-major matrix; just enough linear algebra for the benchmark
/// problems (products and a spectral-norm bound).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// `A x`.
    pub fn matvec(&self, x: &Vector) -> Vector {
        assert_eq!(x.dim(), self.cols, "matvec dimension mismatch");
        let xs = x.as_slice();
        Vector::from_raw(
            (0..self.rows)
                .map(|i| {
                    let row = &self.data[i * self.cols..(i + 1) * self.cols];
                    row.iter().zip(xs).map(|(a, b)| a * b).sum()
                })
                .collect(),
        )
    }

    /// `A^T x`.
    pub fn matvec_transpose(&self, x: &Vector) -> Vector {
        assert_eq!(x.dim(), self.rows, "matvec_transpose dimension mismatch");
        let xs = x.as_slice();
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in xs.iter().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (j, &a) in row.iter().enumerate() {
                out[j] += a * xi;
            }
        }
        Vector::from_raw(out)
    }

    /// Largest singular value, by power iteration on `A^T A`. Stops on the
    /// eigenpair residual `||A^T A v - sigma^2 v|| <= 1e-10 * sigma^2`,
    /// which certifies the eigenvalue error for a symmetric matrix (an
    /// eigenvalue-change test would quit early on clustered spectra).
    /// Deterministic: the start vector is fixed.
    pub fn spectral_norm(&self) -> f64 {
        if self.data.iter().all(|&v| v == 0.0) {
            return 0.0;
        }
        // Graded start breaks symmetry that could hide the top direction.
        let mut v = Vector::new(
            (0..self.cols)
                .map(|j| 1.0 + 0.01 * (j as f64 + 1.0))
                .collect(),
        );
        v = v.scale(1.0 / v.norm());
        let mut sigma_sq = 0.0;
        for _ in 0..200_000 {
            let w = self.matvec_transpose(&self.matvec(&v));
            sigma_sq = v.dot(&w); // Rayleigh quotient, v normalized
            let norm = w.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let residual = w.combine(1.0, &v, -sigma_sq).norm();
            v = w.scale(1.0 / norm);
            if residual <= 1e-10 * sigma_sq.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        sigma_sq.max(0.0).sqrt()
    }
}
