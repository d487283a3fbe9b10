//! Small dense linear algebra: LU factorization with partial pivoting.
//!
//! Matrices are row-major `Vec<f64>` of size `n * n`. Everything here is sized
//! for the (d+1)x(d+1) systems of simplex geometry and the modest kernel and
//! graph systems, so no blocking or BLAS.

/// LU factors of a square matrix, `P A = L U`, stored packed.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

/// Returned when a pivot is exactly (or numerically) zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Singular;

impl Lu {
    /// Factorizes `a` (row-major, `n * n`).
    pub fn factor(a: &[f64], n: usize) -> Result<Self, Singular> {
        assert_eq!(a.len(), n * n, "matrix must be n x n");
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 && n > 0 {
            return Err(Singular);
        }
        let tiny = scale * f64::EPSILON * 1e-3;
        for col in 0..n {
            let mut piv = col;
            let mut best = lu[col * n + col].abs();
            for row in (col + 1)..n {
                let v = lu[row * n + col].abs();
                if v > best {
                    best = v;
                    piv = row;
                }
            }
            if !(best > tiny) {
                return Err(Singular);
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
            }
            let p = lu[col * n + col];
            for row in (col + 1)..n {
                let f = lu[row * n + col] / p;
                lu[row * n + col] = f;
                if f != 0.0 {
                    for j in (col + 1)..n {
                        lu[row * n + j] -= f * lu[col * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, x = P^T w.
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s -= self.lu[j * n + i] * z[j];
            }
            z[i] = s / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in (i + 1)..n {
                s -= self.lu[j * n + i] * z[j];
            }
            z[i] = s;
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Explicit inverse, row-major.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for col in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[col] = 1.0;
            let x = self.solve(&e);
            for row in 0..n {
                inv[row * n + col] = x[row];
            }
        }
        inv
    }
}

/// Induced 1-norm (max absolute column sum).
pub fn norm1(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number of `a` given its factorization. Exact, not an
/// estimate; only use this on small matrices.
pub fn condition1(a: &[f64], lu: &Lu) -> f64 {
    let n = lu.dim();
    norm1(a, n) * norm1(&lu.inverse(), n)
}
