use super::vector::{self, axpy};
use super::{affine_hull_of, IndexSubset, PointSet};
use crate::error::{Error, Result, Witness};
use crate::linalg;
use crate::Real;

/// Euclidean distance from `y` to the convex hull of a subset, with the
/// nearest point.
pub fn dist_point_to_simplex<T: Real>(
    y: &[T],
    set: &PointSet<T>,
    subset: &IndexSubset,
    tol: T,
) -> Result<(T, Vec<T>)> {
    set.check_query(y)?;
    let pts = subset.spanning_points(set);
    dist_point_to_simplex_of(y, &pts, tol).map_err(|e| match e {
        Error::DegenerateInput { reason, .. } => {
            Error::degenerate(reason, Witness::data(subset.indices.iter().copied()))
        }
        other => other,
    })
}

/// Distance to `conv(points)` by recursive face descent: project onto the
/// affine hull; if some barycentric coordinate of the foot is negative,
/// the nearest point lies on one of the facets opposite such vertices.
pub fn dist_point_to_simplex_of<T: Real, P: AsRef<[T]>>(y: &[T], points: &[P], tol: T) -> Result<(T, Vec<T>)> {
    let pts: Vec<&[T]> = points.iter().map(AsRef::as_ref).collect();
    if pts.len() > y.len() + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} points cannot be affinely independent in R^{}",
            pts.len(),
            y.len()
        )));
    }
    descend(y, &pts, tol)
}

fn descend<T: Real>(y: &[T], pts: &[&[T]], tol: T) -> Result<(T, Vec<T>)> {
    if pts.len() == 1 {
        return Ok((vector::dist(y, pts[0]), pts[0].to_vec()));
    }
    affine_hull_of(pts, tol)?;
    let bary = barycentric_of_projection(y, pts, tol)?;
    let outside: Vec<usize> = (0..pts.len()).filter(|&i| bary[i] < -tol).collect();
    if outside.is_empty() {
        let mut foot = vec![T::zero(); y.len()];
        for (b, p) in bary.iter().zip(pts) {
            axpy(&mut foot, *b, p);
        }
        return Ok((vector::dist(y, &foot), foot));
    }
    let mut best: Option<(T, Vec<T>)> = None;
    for drop in outside {
        let facet: Vec<&[T]> = pts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, p)| *p)
            .collect();
        let cand = descend(y, &facet, tol)?;
        if best.as_ref().map_or(true, |b| cand.0 < b.0) {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one facet"))
}

/// Barycentric coordinates (w.r.t. `pts`) of the orthogonal projection of
/// `y` onto `aff(pts)`.
fn barycentric_of_projection<T: Real>(y: &[T], pts: &[&[T]], tol: T) -> Result<Vec<T>> {
    let p0 = pts[0];
    let diffs: Vec<Vec<T>> = pts[1..].iter().map(|p| vector::sub(p, p0)).collect();
    let g = linalg::gram(&diffs);
    let r = vector::sub(y, p0);
    let rhs: Vec<T> = diffs.iter().map(|v| vector::dot(v, &r)).collect();
    let beta = linalg::solve(g, rhs, tol * tol)
        .ok_or_else(|| Error::degenerate("singular simplex", Witness::none()))?;
    let mut bary = Vec::with_capacity(pts.len());
    bary.push(T::one() - beta.iter().copied().sum::<T>());
    bary.extend(beta);
    Ok(bary)
}
