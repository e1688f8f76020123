//! Circular orders induced by hyperplanes rotating about a `(d-2)`-flat.

use std::collections::BTreeSet;

use crate::error::{Error, Result, Witness};
use crate::geometry::vector::{self, orthogonal_complement};
use crate::geometry::{AffineFlat, PointSet};
use crate::Real;

/// Where a reference point sits relative to the hyperplane through the
/// pivot flat and a given point at angle `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfTurn {
    /// Angle in `(θ, θ + π)`.
    Forward,
    /// Angle in `(θ + π, θ + 2π)`.
    Backward,
    /// On the hyperplane, within tolerance.
    On,
}

/// Cyclic order of points around a `(d-2)`-flat, by the angle of their
/// projection onto the flat's orthogonal plane.
#[derive(Clone, Debug)]
pub struct CircularAxis<T> {
    pub pivot: AffineFlat<T>,
    /// Orthonormal basis of the plane orthogonal to the pivot flat.
    pub plane: [Vec<T>; 2],
    /// Angle in `[0, 2π)` of each live point, indexed like the input.
    pub angles: Vec<T>,
    /// Rank of each live point, a permutation of `0..m`.
    pub rank: Vec<u32>,
    /// Live point index at each rank.
    pub order: Vec<usize>,
    /// Rank of the first point with angle `>= angle + π` (cyclically).
    pub antipode_rank: Vec<u32>,
    sorted: Vec<T>,
    windows: Vec<(u32, u32)>,
    angle_tol: T,
}

impl<T: Real> CircularAxis<T> {
    /// Orders `points` around `pivot`, a `(d-2)`-flat. `ids` names the
    /// points in error witnesses. With `tol == 0` all comparisons are exact
    /// and equal angles are ranked in input order instead of rejected.
    pub fn new(points: &[&[T]], ids: &[usize], pivot: AffineFlat<T>, tol: T) -> Result<Self> {
        let d = pivot.ambient_dim();
        if pivot.dim() + 2 != d {
            return Err(Error::InvalidArgument(format!(
                "pivot flat has dimension {}, expected {}",
                pivot.dim(),
                d.saturating_sub(2)
            )));
        }
        let comp = orthogonal_complement(&pivot.basis, d);
        let plane = [comp[0].clone(), comp[1].clone()];
        let scale = points
            .iter()
            .map(|p| vector::dist(p, &pivot.base))
            .fold(T::zero(), T::max)
            .max(vector::max_abs(&pivot.base))
            .max(T::one());
        let mut angles = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let (a, r) = angle_in_plane(p, &pivot.base, &plane);
            if r <= tol * scale {
                return Err(Error::degenerate(
                    "point lies on a pivot flat",
                    Witness { synthetic: true, ..Witness::data([ids[i]]) },
                ));
            }
            angles.push(a);
        }
        let m = points.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| angles[a].partial_cmp(&angles[b]).expect("finite angles"));
        let exact = tol == T::zero();
        let angle_tol = if exact { T::zero() } else { tol.max(T::epsilon() * T::lit(64.0)) };
        if !exact {
            for w in 0..m.saturating_sub(1) {
                let (a, b) = (order[w], order[w + 1]);
                if angles[b] - angles[a] <= angle_tol {
                    return Err(tie(ids, a, b));
                }
            }
            if m >= 2 {
                let (first, last) = (order[0], order[m - 1]);
                if angles[first] + T::two_pi() - angles[last] <= angle_tol {
                    return Err(tie(ids, first, last));
                }
            }
        }
        let mut rank = vec![0u32; m];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r as u32;
        }
        let sorted: Vec<T> = order.iter().map(|&i| angles[i]).collect();
        let windows = antipode_windows(&sorted, angle_tol);
        let antipode_rank = rank.iter().map(|&r| windows[r as usize].0 % m.max(1) as u32).collect();
        Ok(Self { pivot, plane, angles, rank, order, antipode_rank, sorted, windows, angle_tol })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Angle of an arbitrary point, or `None` if it lies on the pivot flat.
    pub fn angle_of(&self, p: &[T], tol: T) -> Option<T> {
        let (a, r) = angle_in_plane(p, &self.pivot.base, &self.plane);
        let scale = vector::dist(p, &self.pivot.base).max(vector::max_abs(&self.pivot.base)).max(T::one());
        (r > tol * scale).then_some(a)
    }

    /// Classifies angle `phi` against the hyperplane at angle `theta`.
    pub fn half_turn(&self, theta: T, phi: T) -> HalfTurn {
        let diff = wrap(phi - theta);
        if diff <= self.angle_tol || diff >= T::two_pi() - self.angle_tol || (diff - T::pi()).abs() <= self.angle_tol {
            HalfTurn::On
        } else if diff < T::pi() {
            HalfTurn::Forward
        } else {
            HalfTurn::Backward
        }
    }

    /// Open half-turn arcs starting at the point with rank `r`, as doubled
    /// rank intervals: `(forward, backward, on)` where forward covers
    /// `(θ, θ + π)`, backward covers `(θ + π, θ + 2π)` and `on` is the
    /// number of points within tolerance of `θ + π`.
    pub fn arcs_from_rank(&self, r: usize) -> ((u32, u32), (u32, u32), usize) {
        let m = self.sorted.len();
        let (lo, hi) = self.windows[r];
        ((r as u32 + 1, lo), (hi, (r + m) as u32), (hi - lo) as usize)
    }
}

/// Doubled-index windows `[lo, hi)` of points within `tol` of the antipode
/// of each rank; `lo` and `hi` lie in `(r, r + m]`. Both ends only move
/// forward as `r` grows.
fn antipode_windows<T: Real>(sorted: &[T], tol: T) -> Vec<(u32, u32)> {
    let m = sorted.len();
    let at = |j: usize| if j < m { sorted[j] } else { sorted[j - m] + T::two_pi() };
    let (mut lo, mut hi) = (0, 0);
    let mut out = Vec::with_capacity(m);
    for r in 0..m {
        let target = sorted[r] + T::pi();
        lo = lo.max(r + 1);
        while lo < r + m && at(lo) < target - tol {
            lo += 1;
        }
        hi = hi.max(lo);
        while hi < r + m && at(hi) <= target + tol {
            hi += 1;
        }
        out.push((lo as u32, hi as u32));
    }
    out
}

fn tie(ids: &[usize], a: usize, b: usize) -> Error {
    Error::degenerate(
        "two points are coplanar with a pivot flat",
        Witness { synthetic: true, ..Witness::data([ids[a], ids[b]]) },
    )
}

fn wrap<T: Real>(a: T) -> T {
    let t = T::two_pi();
    let r = a % t;
    if r < T::zero() {
        r + t
    } else {
        r
    }
}

fn angle_in_plane<T: Real>(p: &[T], base: &[T], plane: &[Vec<T>; 2]) -> (T, T) {
    let (mut x, mut y) = (T::zero(), T::zero());
    for i in 0..p.len() {
        let v = p[i] - base[i];
        x = x + v * plane[0][i];
        y = y + v * plane[1][i];
    }
    let a = wrap(y.atan2(x));
    (if a >= T::two_pi() { T::zero() } else { a }, (x * x + y * y).sqrt())
}

/// Circular ranks of the points of `set` outside `excluded` around `pivot`.
///
/// Returns the axis and the ids of the live points in input order.
pub fn circular_ranks<T: Real>(
    set: &PointSet<T>,
    excluded: &BTreeSet<usize>,
    pivot: AffineFlat<T>,
    tol: T,
) -> Result<(CircularAxis<T>, Vec<usize>)> {
    let ids: Vec<usize> = (0..set.len()).filter(|i| !excluded.contains(i)).collect();
    let pts: Vec<&[T]> = ids.iter().map(|&i| set.point(i)).collect();
    let axis = CircularAxis::new(&pts, &ids, pivot, tol)?;
    Ok((axis, ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{affine_hull_of, PointSet};

    fn z_axis() -> AffineFlat<f64> {
        affine_hull_of(&[vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]], 1e-12).unwrap()
    }

    #[test]
    fn ranks_follow_angles() {
        let set = PointSet::from_rows(vec![
            vec![1.0, 0.1, 3.0],
            vec![-1.0, 0.0, -2.0],
            vec![0.0, 1.0, 0.5],
            vec![0.2, -1.0, 7.0],
        ])
        .unwrap();
        let (axis, ids) = circular_ranks(&set, &BTreeSet::new(), z_axis(), 1e-9).unwrap();
        assert_eq!(ids, vec![0, 1, 2, 3]);
        let mut seen = axis.rank.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        // angular order of (x, y) projections measured in the plane basis is
        // cyclic: either orientation, consistent across the four points
        let r = |i: usize| axis.rank[i] as i64;
        let step = (r(2) - r(0)).rem_euclid(4);
        assert!(step == 1 || step == 3);
        assert_eq!((r(1) - r(2)).rem_euclid(4), step);
        assert_eq!((r(3) - r(1)).rem_euclid(4), step);
    }

    #[test]
    fn quarter_turns_about_the_x_axis() {
        let x_axis = affine_hull_of(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]], 1e-12).unwrap();
        let set = PointSet::from_rows(vec![vec![0.5, 1.0, 0.0], vec![0.5, 0.0, 1.0], vec![0.5, -1.0, 0.0]]).unwrap();
        let (axis, _) = circular_ranks(&set, &BTreeSet::new(), x_axis, 1e-9).unwrap();
        let r: Vec<i64> = axis.rank.iter().map(|&x| x as i64).collect();
        let step = (r[1] - r[0]).rem_euclid(3);
        assert_eq!((r[2] - r[1]).rem_euclid(3), step);
        let gap = |a: usize, b: usize| wrap::<f64>(axis.angles[b] - axis.angles[a]).abs();
        let q = std::f64::consts::FRAC_PI_2;
        assert!((gap(0, 1) - q).abs() < 1e-12 && (gap(1, 2) - q).abs() < 1e-12);
        assert!((gap(0, 2) - 2.0 * q).abs() < 1e-12);
    }

    #[test]
    fn arcs_split_the_turn() {
        let pts: Vec<Vec<f64>> = (0..7)
            .map(|i| {
                let a = 0.3 + i as f64 * 0.9;
                vec![a.cos(), a.sin(), i as f64]
            })
            .collect();
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let axis = CircularAxis::new(&refs, &(0..7).collect::<Vec<_>>(), z_axis(), 1e-9).unwrap();
        for r in 0..7 {
            let (f, b, on) = axis.arcs_from_rank(r);
            assert_eq!(on, 0);
            assert_eq!((f.1 - f.0) + (b.1 - b.0), 6);
            let theta = axis.angles[axis.order[r]];
            for j in f.0..f.1 {
                let phi = axis.angles[axis.order[j as usize % 7]];
                assert_eq!(axis.half_turn(theta, phi), HalfTurn::Forward);
            }
            for j in b.0..b.1 {
                let phi = axis.angles[axis.order[j as usize % 7]];
                assert_eq!(axis.half_turn(theta, phi), HalfTurn::Backward);
            }
        }
    }

    #[test]
    fn coplanar_pair_is_degenerate() {
        let set = PointSet::from_rows(vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 5.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let err = circular_ranks(&set, &BTreeSet::new(), z_axis(), 1e-9).unwrap_err();
        match err {
            Error::DegenerateInput { witness, .. } => assert_eq!(witness.ids, vec![0, 1]),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn point_on_pivot_is_degenerate() {
        let set = PointSet::from_rows(vec![vec![0.0, 0.0, 4.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert!(circular_ranks(&set, &BTreeSet::new(), z_axis(), 1e-9).unwrap_err().is_degenerate());
    }

    #[test]
    fn excluded_points_are_skipped() {
        let set = PointSet::from_rows(vec![vec![0.0, 0.0, 4.0], vec![1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0]]).unwrap();
        let (axis, ids) = circular_ranks(&set, &BTreeSet::from([0]), z_axis(), 1e-9).unwrap();
        assert_eq!(ids, vec![1, 2]);
        assert_eq!(axis.len(), 2);
    }
}
