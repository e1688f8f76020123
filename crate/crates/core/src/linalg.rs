//! Small dense solves for the fixed-size systems that appear in the search.

use crate::Real;

/// Solves the `n x n` row-major system `a x = b` by Gaussian elimination
/// with partial pivoting. Returns `None` if a pivot falls below
/// `tol * max|a|`.
pub fn solve<T: Real>(mut a: Vec<T>, mut b: Vec<T>, tol: T) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let scale = a.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if scale == T::zero() {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    for col in 0..n {
        let (piv, pmax) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((col, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pmax > tol * scale) {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            b.swap(piv, col);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f == T::zero() {
                continue;
            }
            for c in col..n {
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
            }
            b[r] = b[r] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s = s - a[r * n + c] * x[c];
        }
        x[r] = s / a[r * n + r];
    }
    Some(x)
}

/// Gram matrix `G[i][j] = v_i . v_j` as a row-major vector.
pub fn gram<T: Real>(vs: &[Vec<T>]) -> Vec<T> {
    let k = vs.len();
    let mut g = vec![T::zero(); k * k];
    for i in 0..k {
        for j in i..k {
            let v = crate::geometry::vector::dot(&vs[i], &vs[j]);
            g[i * k + j] = v;
            g[j * k + i] = v;
        }
    }
    g
}
