//! Brute-force references.
//!
//! Everything here is enumeration over subsets with its own small dense
//! solvers; only vector arithmetic and subset enumeration are shared with
//! the rest of the crate.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::vector::{dot, max_abs, norm, sub};
use crate::geometry::{PointSet, SubsetKind};
use crate::util::{binomial, for_each_combination};
use crate::Real;

/// Default cap on the number of subsets an oracle enumerates.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// Relative slack under which two objective values count as tied.
const TIE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport<T> {
    pub optimum: T,
    /// Every subset within a relative `1e-12` of the optimum, sorted.
    pub optimizers: Vec<Vec<usize>>,
    /// All `(subset, value)` pairs, when requested.
    pub table: Option<Vec<(Vec<usize>, T)>>,
    #[serde(serialize_with = "secs")]
    pub wall_time: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Visits all `k`-subsets of `0..n` in parallel, split on the first
/// element; results come back in lexicographic subset order.
fn par_subsets<R: Send>(n: usize, k: usize, f: impl Fn(&[usize]) -> Option<R> + Sync) -> Vec<(Vec<usize>, R)> {
    if k == 0 || k > n {
        return Vec::new();
    }
    let chunks: Vec<Vec<(Vec<usize>, R)>> = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut ids = vec![first; k];
            for_each_combination::<()>(n - first - 1, k - 1, |rest| {
                for (slot, &r) in ids[1..].iter_mut().zip(rest) {
                    *slot = first + 1 + r;
                }
                if let Some(v) = f(&ids) {
                    out.push((ids.clone(), v));
                }
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Solves `a x = b` (row-major, `n x n`) by Gaussian elimination with
/// complete pivoting. `None` when singular relative to `tol`.
fn solve_square<T: Real>(mut a: Vec<T>, mut b: Vec<T>, tol: T) -> Option<Vec<T>> {
    let n = b.len();
    let big = a.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if big == T::zero() {
        return None;
    }
    let mut col: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut pv) = (k, k, T::zero());
        for r in k..n {
            for c in k..n {
                let v = a[r * n + c].abs();
                if v > pv {
                    (pr, pc, pv) = (r, c, v);
                }
            }
        }
        if pv <= tol * big {
            return None;
        }
        if pr != k {
            for c in 0..n {
                a.swap(k * n + c, pr * n + c);
            }
            b.swap(k, pr);
        }
        if pc != k {
            for r in 0..n {
                a.swap(r * n + k, r * n + pc);
            }
            col.swap(k, pc);
        }
        for r in k + 1..n {
            let f = a[r * n + k] / a[k * n + k];
            if f != T::zero() {
                for c in k..n {
                    let v = a[k * n + c];
                    a[r * n + c] = a[r * n + c] - f * v;
                }
                b[r] = b[r] - f * b[k];
            }
        }
    }
    let mut z = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s = s - a[k * n + c] * z[c];
        }
        z[k] = s / a[k * n + k];
    }
    let mut x = vec![T::zero(); n];
    for (k, &c) in col.iter().enumerate() {
        x[c] = z[k];
    }
    Some(x)
}

/// Projection of `y` onto `aff(pts)` by the normal equations; returns the
/// affine coefficients and the distance.
fn project<T: Real>(y: &[T], pts: &[&[T]], tol: T) -> Option<(Vec<T>, T)> {
    let p0 = pts[0];
    let cols: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, p0)).collect();
    let m = cols.len();
    let r = sub(y, p0);
    let mut coef = vec![T::one()];
    let mut foot = p0.to_vec();
    if m > 0 {
        let mut g = vec![T::zero(); m * m];
        let mut rhs = vec![T::zero(); m];
        for i in 0..m {
            rhs[i] = dot(&cols[i], &r);
            for j in 0..m {
                g[i * m + j] = dot(&cols[i], &cols[j]);
            }
        }
        let c = solve_square(g, rhs, tol)?;
        let s: T = c.iter().copied().sum();
        coef = std::iter::once(T::one() - s).chain(c.iter().copied()).collect();
        for (ci, col) in c.iter().zip(&cols) {
            for (f, v) in foot.iter_mut().zip(col) {
                *f = *f + *ci * *v;
            }
        }
    }
    Some((coef, norm(&sub(y, &foot))))
}

/// Distance from `y` to `aff(pts)`.
pub fn distance_to_flat<T: Real>(y: &[T], pts: &[&[T]], tol: T) -> Option<T> {
    project(y, pts, tol).map(|(_, d)| d)
}

/// Distance from `y` to `conv(pts)`: the minimum over faces whose affine
/// projection has nonnegative coefficients.
pub fn distance_to_simplex<T: Real>(y: &[T], pts: &[&[T]], tol: T) -> Option<T> {
    let k = pts.len();
    project(y, pts, tol)?;
    let mut best = T::infinity();
    for mask in 1u32..(1 << k) {
        let face: Vec<&[T]> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
        if let Some((coef, d)) = project(y, &face, tol) {
            if coef.iter().all(|&c| c >= -T::lit(1e-12)) && d < best {
                best = d;
            }
        }
    }
    Some(best)
}

fn finish<T: Real>(mut rows: Vec<(Vec<usize>, T)>, keep_table: bool, start: Instant) -> Result<OracleReport<T>> {
    let optimum = rows.iter().map(|r| r.1).fold(T::infinity(), T::min);
    if !optimum.is_finite() {
        return Err(Error::degenerate("every subset is degenerate", crate::Witness::none()));
    }
    let slack = T::lit(TIE) * optimum.max(T::one());
    let optimizers = rows.iter().filter(|r| r.1 <= optimum + slack).map(|r| r.0.clone()).collect();
    let table = keep_table.then(|| std::mem::take(&mut rows));
    Ok(OracleReport { optimum, optimizers, table, wall_time: start.elapsed() })
}

fn with_origin<'a, T: Real>(origin: &'a [T], set: &'a PointSet<T>, ids: &[usize], kind: SubsetKind) -> Vec<&'a [T]> {
    let mut pts: Vec<&[T]> = Vec::with_capacity(ids.len() + 1);
    if kind == SubsetKind::Linear {
        pts.push(origin);
    }
    pts.extend(ids.iter().map(|&i| set.point(i)));
    pts
}

/// Nearest induced flat by enumeration of all `k`-subsets; linear spans
/// include the origin. Affinely dependent subsets are skipped.
pub fn brute_nearest_flat<T: Real>(
    set: &PointSet<T>,
    y: &[T],
    k: usize,
    kind: SubsetKind,
    budget: u128,
    keep_table: bool,
) -> Result<OracleReport<T>> {
    set.check_query(y)?;
    if kind == SubsetKind::Convex {
        return brute_nearest_simplex(set, y, k, budget, keep_table);
    }
    check_budget(binomial(set.len(), k), budget)?;
    let start = Instant::now();
    let origin = vec![T::zero(); set.dim()];
    let tol = T::epsilon() * T::lit(64.0);
    let rows = par_subsets(set.len(), k, |ids| distance_to_flat(y, &with_origin(&origin, set, ids, kind), tol));
    finish(rows, keep_table, start)
}

/// Nearest induced simplex over all subsets of sizes `1..=k`.
pub fn brute_nearest_simplex<T: Real>(
    set: &PointSet<T>,
    y: &[T],
    k: usize,
    budget: u128,
    keep_table: bool,
) -> Result<OracleReport<T>> {
    set.check_query(y)?;
    let needed: u128 = (1..=k).map(|j| binomial(set.len(), j)).sum();
    check_budget(needed, budget)?;
    let start = Instant::now();
    let tol = T::epsilon() * T::lit(64.0);
    let mut rows = Vec::new();
    for size in 1..=k {
        rows.extend(par_subsets(set.len(), size, |ids| {
            let pts: Vec<&[T]> = ids.iter().map(|&i| set.point(i)).collect();
            distance_to_simplex(y, &pts, tol)
        }));
    }
    finish(rows, keep_table, start)
}

/// Whether the hull of `a` (affine or convex) meets `conv(b)`, for
/// `|a| + |b| = d + 2`: the unique solution of
/// `Σ α_i a_i = Σ β_j b_j, Σ α = Σ β = 1` must have `β >= 0` (and `α >= 0`
/// for convex hulls).
pub fn hulls_meet<T: Real>(a: &[&[T]], b: &[&[T]], convex: bool, tol: T) -> Option<bool> {
    let d = a[0].len();
    let n = a.len() + b.len();
    if n != d + 2 {
        return None;
    }
    let mut m = vec![T::zero(); n * n];
    let mut rhs = vec![T::zero(); n];
    for r in 0..d {
        for (c, p) in a.iter().enumerate() {
            m[r * n + c] = p[r];
        }
        for (c, p) in b.iter().enumerate() {
            m[r * n + a.len() + c] = -p[r];
        }
    }
    for c in 0..a.len() {
        m[d * n + c] = T::one();
    }
    for c in 0..b.len() {
        m[(d + 1) * n + a.len() + c] = T::one();
    }
    rhs[d] = T::one();
    rhs[d + 1] = T::one();
    let x = solve_square(m, rhs, tol)?;
    let nonneg = |v: &[T]| v.iter().all(|&c| c >= T::zero());
    Some(nonneg(&x[a.len()..]) && (!convex || nonneg(&x[..a.len()])))
}

/// Number of `k`-subsets whose hull meets `conv(delta)`; `None` entries
/// (singular systems) are counted separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BruteCount {
    pub count: u64,
    pub singular: u64,
}

pub fn brute_count<T: Real>(
    set: &PointSet<T>,
    k: usize,
    delta: &[Vec<T>],
    kind: SubsetKind,
    budget: u128,
) -> Result<BruteCount> {
    check_budget(binomial(set.len(), k), budget)?;
    let origin = vec![T::zero(); set.dim()];
    let b: Vec<&[T]> = delta.iter().map(|v| v.as_slice()).collect();
    let tol = T::epsilon() * T::lit(64.0);
    let convex = kind == SubsetKind::Convex;
    let rows = par_subsets(set.len(), k, |ids| Some(hulls_meet(&with_origin(&origin, set, ids, kind), &b, convex, tol)));
    let mut out = BruteCount { count: 0, singular: 0 };
    for (_, r) in rows {
        match r {
            Some(true) => out.count += 1,
            Some(false) => {}
            None => out.singular += 1,
        }
    }
    Ok(out)
}

/// Determinant of a square row-major matrix by elimination with partial
/// pivoting.
fn determinant<T: Real>(mut a: Vec<T>, n: usize) -> T {
    let mut det = T::one();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i * n + k].abs().partial_cmp(&a[j * n + k].abs()).expect("finite")).expect("rows");
        if a[p * n + k] == T::zero() {
            return T::zero();
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det = -det;
        }
        det = det * a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / a[k * n + k];
            for c in k..n {
                let v = a[k * n + c];
                a[r * n + c] = a[r * n + c] - f * v;
            }
        }
    }
    det
}

/// First `(d + 1)`-subset (lexicographic) lying on a common hyperplane:
/// `|det[p_i - p_0]|` at most `tol` times the product of the row norms.
pub fn brute_degeneracy<T: Real>(set: &PointSet<T>, tol: T, budget: u128) -> Result<Option<Vec<usize>>> {
    let d = set.dim();
    check_budget(binomial(set.len(), d + 1), budget)?;
    let scale = set.iter().map(max_abs).fold(T::one(), T::max);
    let rows = par_subsets(set.len(), d + 1, |ids| {
        let p0 = set.point(ids[0]);
        let mut m = Vec::with_capacity(d * d);
        let mut bound = T::one();
        for &i in &ids[1..] {
            let r = sub(set.point(i), p0);
            bound = bound * norm(&r).max(tol * scale);
            m.extend(r);
        }
        (determinant(m, d).abs() <= tol * bound).then_some(())
    });
    Ok(rows.into_iter().next().map(|(ids, _)| ids))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: Vec<Vec<f64>>) -> PointSet<f64> {
        PointSet::from_rows(rows).unwrap()
    }

    #[test]
    fn single_subset_when_n_equals_k() {
        let s = set(vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        let r = brute_nearest_flat(&s, &[0.5, 2.0], 2, SubsetKind::Affine, DEFAULT_BUDGET, true).unwrap();
        assert_eq!(r.optimizers, vec![vec![0, 1]]);
        assert!((r.optimum - 2.0).abs() < 1e-15);
        assert_eq!(r.table.unwrap().len(), 1);
    }

    #[test]
    fn query_on_a_flat() {
        let s = set(vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![3.0, -1.0, 0.5]]);
        let r = brute_nearest_flat(&s, &[2.0, 2.0, 2.0], 2, SubsetKind::Affine, DEFAULT_BUDGET, false).unwrap();
        assert!(r.optimum < 1e-14);
        assert_eq!(r.optimizers[0], vec![0, 1]);
    }

    #[test]
    fn linear_span_includes_origin() {
        let s = set(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![5.0, 5.0, 5.0]]);
        // span{e1, e2} is the plane z = 0
        let r = brute_nearest_flat(&s, &[3.0, -2.0, 0.25], 2, SubsetKind::Linear, DEFAULT_BUDGET, false).unwrap();
        assert!((r.optimum - 0.25).abs() < 1e-14);
    }

    #[test]
    fn simplex_examples() {
        let s = set(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let r = brute_nearest_simplex(&s, &[0.0, 0.0, 0.0], 2, DEFAULT_BUDGET, false).unwrap();
        assert!((r.optimum - 0.5f64.sqrt()).abs() < 1e-14);
        let s = set(vec![vec![1.0, 0.0, 0.0], vec![2.0, 1.0, 0.0]]);
        let r = brute_nearest_simplex(&s, &[0.0, 0.0, 0.0], 2, DEFAULT_BUDGET, false).unwrap();
        assert!((r.optimum - 1.0).abs() < 1e-14);
        // the segment ties with its endpoint
        assert_eq!(r.optimizers, vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn simplex_never_beats_flat() {
        let s = set(vec![vec![1.0, 2.0], vec![-0.5, 0.3], vec![2.0, -1.0], vec![0.1, 0.9]]);
        let y = [0.7, 3.1];
        for k in 1..=2 {
            let f = brute_nearest_flat(&s, &y, k, SubsetKind::Affine, DEFAULT_BUDGET, false).unwrap();
            let c = brute_nearest_simplex(&s, &y, k, DEFAULT_BUDGET, false).unwrap();
            assert!(f.optimum <= c.optimum + 1e-14);
        }
    }

    #[test]
    fn vertical_line_meets_triangle() {
        let tri: [&[f64]; 3] = [&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]];
        let a: [&[f64]; 2] = [&[0.25, 0.25, -1.0], &[0.25, 0.25, 1.0]];
        assert_eq!(hulls_meet(&a, &tri, false, 1e-14), Some(true));
        assert_eq!(hulls_meet(&a, &tri, true, 1e-14), Some(true));
        let a: [&[f64]; 2] = [&[0.25, 0.25, 1.0], &[0.25, 0.25, 3.0]];
        assert_eq!(hulls_meet(&a, &tri, false, 1e-14), Some(true));
        assert_eq!(hulls_meet(&a, &tri, true, 1e-14), Some(false));
        let a: [&[f64]; 2] = [&[5.0, 5.0, -1.0], &[5.0, 5.0, 1.0]];
        assert_eq!(hulls_meet(&a, &tri, false, 1e-14), Some(false));
    }

    #[test]
    fn count_of_a_single_pair() {
        let s = set(vec![vec![0.25, 0.25, -1.0], vec![0.25, 0.25, 1.0]]);
        let tri = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let c = brute_count(&s, 2, &tri, SubsetKind::Affine, DEFAULT_BUDGET).unwrap();
        assert_eq!(c, BruteCount { count: 1, singular: 0 });
    }

    #[test]
    fn collinear_triple_is_degenerate() {
        let s = set(vec![vec![0.0, 0.0], vec![1.0, 0.3], vec![2.0, 2.0], vec![3.0, 0.9], vec![-1.0, 5.0]]);
        assert_eq!(brute_degeneracy(&s, 1e-9, DEFAULT_BUDGET).unwrap(), Some(vec![0, 1, 3]));
        let s = set(vec![vec![0.0, 0.0], vec![1.0, 0.3], vec![2.0, 2.0], vec![-1.0, 5.0]]);
        assert_eq!(brute_degeneracy(&s, 1e-9, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let s = set((0..40).map(|i| vec![i as f64, (i * i) as f64, 1.0 / (1.0 + i as f64)]).collect());
        let e = brute_nearest_flat(&s, &[0.0, 0.0, 0.0], 3, SubsetKind::Affine, 100, false).unwrap_err();
        assert_eq!(e, Error::BudgetExceeded { needed: 9880, budget: 100 });
    }
}
