//! Small dense real linear algebra: LU factorization with partial pivoting
//! and an exact 1-norm reciprocal condition number.
//!
//! The systems solved here are tiny (16×16), so the inverse norm is computed
//! exactly by back-substituting all unit vectors instead of using a norm
//! estimator.

/// LU factors of a square matrix, stored in a single row-major buffer.
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    pivots: Vec<usize>,
}

/// The matrix was exactly singular: no usable pivot in some column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactlySingular {
    pub column: usize,
}

impl LuFactors {
    /// Factor `a` (row-major, `n`×`n`) as P·L·U with partial pivoting.
    pub fn factor(a: &[f64], n: usize) -> Result<Self, ExactlySingular> {
        assert_eq!(a.len(), n * n);
        let mut lu = a.to_vec();
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let mut p = k;
            let mut max = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let v = lu[i * n + k].abs();
                if v > max {
                    max = v;
                    p = i;
                }
            }
            if max == 0.0 {
                return Err(ExactlySingular { column: k });
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }
        Ok(LuFactors { n, lu, pivots })
    }

    /// Solve A·x = b for one right-hand side.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        // The stored multipliers reflect the fully pivoted row order, so all
        // interchanges must be applied to the right-hand side up front.
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for k in 0..n {
            for i in (k + 1)..n {
                let f = self.lu[i * n + k];
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            x[k] /= self.lu[k * n + k];
            for i in 0..k {
                let f = self.lu[i * n + k];
                x[i] -= f * x[k];
            }
        }
        x
    }

    /// Exact 1-norm of A⁻¹, by solving against every unit vector.
    pub fn inverse_one_norm(&self) -> f64 {
        let n = self.n;
        let mut e = vec![0.0; n];
        let mut worst: f64 = 0.0;
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e);
            e[j] = 0.0;
            let sum: f64 = col.iter().map(|v| v.abs()).sum();
            worst = worst.max(sum);
        }
        worst
    }
}

/// 1-norm (maximum absolute column sum) of a row-major `n`×`n` matrix.
pub fn one_norm(a: &[f64], n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let sum: f64 = (0..n).map(|i| a[i * n + j].abs()).sum();
        worst = worst.max(sum);
    }
    worst
}
