//! Dense two-phase simplex method with Bland's rule.
//!
//! Solves `min c.x` subject to `A x = b` with each variable either
//! nonnegative or free. Free variables are split as `x = x+ - x-`. Sized
//! for the handful of variables and constraints that arise when shooting a
//! polytope face at a flat or a simplex.

use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, x: Vec<T> },
    Infeasible,
    Unbounded,
}

/// An equality-form linear program.
#[derive(Clone, Debug)]
pub struct Lp<T> {
    pub objective: Vec<T>,
    /// Row-major, `rows x objective.len()`.
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub bounds: Vec<VarBound>,
}

impl<T: Real> Lp<T> {
    pub fn solve(&self, tol: T) -> LpOutcome<T> {
        let nvar = self.objective.len();
        // column map: original var -> (plus col, optional minus col)
        let mut cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(nvar);
        let mut ncol = 0;
        for b in &self.bounds {
            match b {
                VarBound::NonNegative => {
                    cols.push((ncol, None));
                    ncol += 1;
                }
                VarBound::Free => {
                    cols.push((ncol, Some(ncol + 1)));
                    ncol += 2;
                }
            }
        }
        let m = self.b.len();
        let scale = self
            .a
            .iter()
            .flatten()
            .chain(&self.b)
            .fold(T::zero(), |s, &x| s.max(x.abs()))
            .max(T::one());
        let eps = tol * scale;

        // tableau rows: m constraints with artificials; width ncol + m + 1
        let width = ncol + m + 1;
        let mut t = vec![vec![T::zero(); width]; m];
        for (r, row) in self.a.iter().enumerate() {
            let sign = if self.b[r] < T::zero() { -T::one() } else { T::one() };
            for (j, &(p, mi)) in cols.iter().enumerate() {
                t[r][p] = sign * row[j];
                if let Some(mi) = mi {
                    t[r][mi] = -sign * row[j];
                }
            }
            t[r][ncol + r] = T::one();
            t[r][width - 1] = sign * self.b[r];
        }
        let mut basis: Vec<usize> = (ncol..ncol + m).collect();

        // phase one: minimize sum of artificials
        let mut cost1 = vec![T::zero(); width - 1];
        for c in cost1.iter_mut().skip(ncol) {
            *c = T::one();
        }
        if !run_simplex(&mut t, &mut basis, &cost1, ncol + m, eps) {
            return LpOutcome::Unbounded;
        }
        let infeas: T = basis
            .iter()
            .enumerate()
            .filter(|&(_, &bv)| bv >= ncol)
            .map(|(r, _)| t[r][width - 1])
            .sum();
        if infeas > eps.sqrt().min(T::lit(1e-6)) * scale {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis where possible
        for r in 0..m {
            if basis[r] >= ncol {
                if let Some(j) = (0..ncol).find(|&j| t[r][j].abs() > eps) {
                    pivot(&mut t, &mut basis, r, j);
                }
            }
        }

        // phase two over structural columns only
        let mut cost2 = vec![T::zero(); width - 1];
        for (j, &(p, mi)) in cols.iter().enumerate() {
            cost2[p] = self.objective[j];
            if let Some(mi) = mi {
                cost2[mi] = -self.objective[j];
            }
        }
        for c in cost2.iter_mut().skip(ncol) {
            *c = T::zero();
        }
        if !run_simplex(&mut t, &mut basis, &cost2, ncol, eps) {
            return LpOutcome::Unbounded;
        }
        let mut raw = vec![T::zero(); ncol];
        for (r, &bv) in basis.iter().enumerate() {
            if bv < ncol {
                raw[bv] = t[r][width - 1];
            }
        }
        let x: Vec<T> = cols
            .iter()
            .map(|&(p, mi)| raw[p] - mi.map_or(T::zero(), |mi| raw[mi]))
            .collect();
        let value = x.iter().zip(&self.objective).map(|(&a, &c)| a * c).sum();
        LpOutcome::Optimal { value, x }
    }
}

fn pivot<T: Real>(t: &mut [Vec<T>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c];
    for x in t[r].iter_mut() {
        *x = *x / p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r {
            let f = row[c];
            if f != T::zero() {
                for (x, &y) in row.iter_mut().zip(&prow) {
                    *x = *x - f * y;
                }
            }
        }
    }
    basis[r] = c;
}

/// Minimizes `cost` over the current tableau, entering only columns below
/// `allowed`. Returns false when unbounded.
fn run_simplex<T: Real>(t: &mut [Vec<T>], basis: &mut [usize], cost: &[T], allowed: usize, eps: T) -> bool {
    let m = t.len();
    let last = cost.len();
    for _ in 0..10_000 {
        // reduced cost r_j = c_j - c_B . column_j
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = cost[j];
            for r in 0..m {
                rc = rc - cost[basis[r]] * t[r][j];
            }
            rc < -eps
        });
        let Some(j) = entering else { return true };
        // ratio test, ties broken by smallest basis index (Bland)
        let mut best: Option<(T, usize)> = None;
        for r in 0..m {
            if t[r][j] > eps {
                let ratio = t[r][last] / t[r][j];
                let better = match best {
                    None => true,
                    Some((br, bi)) => ratio < br - eps || (ratio <= br + eps && basis[r] < basis[bi]),
                };
                if better {
                    best = Some((ratio, r));
                }
            }
        }
        let Some((_, r)) = best else { return false };
        pivot(t, basis, r, j);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_optimum() {
        // min x + y  s.t. x + 2y = 4, x - y = 1, x,y >= 0  -> x=2, y=1
        let lp = Lp {
            objective: vec![1.0f64, 1.0],
            a: vec![vec![1.0, 2.0], vec![1.0, -1.0]],
            b: vec![4.0, 1.0],
            bounds: vec![VarBound::NonNegative; 2],
        };
        match lp.solve(1e-12) {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 3.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x + y = -1 with x,y >= 0
        let lp = Lp {
            objective: vec![1.0f64, 1.0],
            a: vec![vec![1.0, 1.0]],
            b: vec![-1.0],
            bounds: vec![VarBound::NonNegative; 2],
        };
        assert_eq!(lp.solve(1e-12), LpOutcome::Infeasible);
    }

    #[test]
    fn free_variables() {
        // min s s.t. s - t = 0, t free, s >= 0, t = -2 + s ... -> s free to 0? use t + 3 = s
        let lp = Lp {
            objective: vec![1.0f64, 0.0],
            a: vec![vec![1.0, -1.0]],
            b: vec![3.0],
            bounds: vec![VarBound::NonNegative, VarBound::Free],
        };
        match lp.solve(1e-12) {
            LpOutcome::Optimal { value, x } => {
                assert!(value.abs() < 1e-9);
                assert!((x[1] + 3.0).abs() < 1e-9);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        let lp = Lp {
            objective: vec![-1.0f64, 0.0],
            a: vec![vec![1.0, -1.0]],
            b: vec![0.0],
            bounds: vec![VarBound::NonNegative; 2],
        };
        assert_eq!(lp.solve(1e-12), LpOutcome::Unbounded);
    }
}
