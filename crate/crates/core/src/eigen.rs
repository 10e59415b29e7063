//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson-style shifts).

use crate::scalar::Real;

/// Eigenpairs of a real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalEigen<T> {
    /// Eigenvalues, ascending.
    pub values: Vec<T>,
    /// Row-major `dim × dim`; column `i` is the eigenvector of `values[i]`.
    pub vectors: Vec<T>,
    pub dim: usize,
}

impl<T: Real> TridiagonalEigen<T> {
    #[inline]
    pub fn vector_component(&self, row: usize, col: usize) -> T {
        self.vectors[row * self.dim + col]
    }
}

/// Diagonalizes the matrix with diagonal `diag` and off-diagonal `offdiag`
/// (`offdiag[i]` couples rows `i` and `i + 1`).
pub fn symmetric_tridiagonal_eigen<T: Real>(diag: &[T], offdiag: &[T]) -> TridiagonalEigen<T> {
    let n = diag.len();
    assert!(n == 0 || offdiag.len() + 1 == n, "offdiag must have length dim - 1");
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(T::zero());
    e.truncate(n);
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let two = T::lit(2.0);
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] is zero, so m < n always
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                assert!(iter <= 64 * n.max(1), "tridiagonal QL failed to converge");
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let row = k * n;
                        let hk = v[row + i + 1];
                        v[row + i + 1] = s * v[row + i] + c * hk;
                        v[row + i] = c * v[row + i] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    TridiagonalEigen {
        values,
        vectors,
        dim: n,
    }
}
