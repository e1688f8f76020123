//! Incremental (beneath-beyond) convex hull in any fixed dimension.
//!
//! Assumes general position: every facet of the result is a simplex. Used
//! only on jittered spherical nets, where that holds by construction.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::vector::{self, dot, norm, reject};
use crate::geometry::hyperplane_through;
use crate::Real;

/// A simplicial facet `normal . x = offset`, normal pointing outward.
#[derive(Clone, Debug, PartialEq)]
pub struct HullFacet<T> {
    pub vertices: Vec<usize>,
    pub normal: Vec<T>,
    pub offset: T,
}

pub fn convex_hull<T: Real>(points: &[Vec<T>], tol: T) -> Result<Vec<HullFacet<T>>> {
    let d = points.first().map_or(0, Vec::len);
    if d < 2 || points.len() < d + 1 {
        return Err(Error::InvalidArgument("hull needs at least d + 1 points in d >= 2".into()));
    }
    let start = initial_simplex(points, tol)?;
    let mut interior = vec![T::zero(); d];
    for &i in &start {
        vector::axpy(&mut interior, T::one() / T::lit((d + 1) as f64), &points[i]);
    }
    let scale = points.iter().map(|p| norm(p)).fold(T::zero(), T::max);
    let eps = tol * scale;

    let mut facets: Vec<HullFacet<T>> = Vec::new();
    for skip in 0..=d {
        let verts: Vec<usize> = start.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        facets.push(make_facet(points, verts, &interior, tol)?);
    }
    let mut used = vec![false; points.len()];
    for &i in &start {
        used[i] = true;
    }
    for (p_id, p) in points.iter().enumerate() {
        if used[p_id] {
            continue;
        }
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&f| dot(&facets[f].normal, p) - facets[f].offset > eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &f in &visible {
            let vs = &facets[f].vertices;
            for skip in 0..vs.len() {
                let ridge: Vec<usize> = vs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        let mut keep = vec![true; facets.len()];
        for &f in &visible {
            keep[f] = false;
        }
        let mut next: Vec<HullFacet<T>> = facets
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(f, _)| f)
            .collect();
        for mut ridge in horizon {
            ridge.push(p_id);
            next.push(make_facet(points, ridge, &interior, tol)?);
        }
        facets = next;
    }
    Ok(facets)
}

fn make_facet<T: Real>(points: &[Vec<T>], mut vertices: Vec<usize>, interior: &[T], tol: T) -> Result<HullFacet<T>> {
    vertices.sort_unstable();
    let pts: Vec<&[T]> = vertices.iter().map(|&i| points[i].as_slice()).collect();
    let h = hyperplane_through(&pts, tol)
        .ok_or_else(|| Error::Certificate(format!("flat facet {vertices:?}")))?;
    let d = interior.len();
    let (mut normal, mut offset) = (h[..d].to_vec(), -h[d]);
    if dot(&normal, interior) > offset {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    Ok(HullFacet { vertices, normal, offset })
}

/// Greedy choice of `d + 1` affinely independent points, each maximizing
/// its distance to the span of the previous ones.
fn initial_simplex<T: Real>(points: &[Vec<T>], tol: T) -> Result<Vec<usize>> {
    let d = points[0].len();
    let first = 0usize;
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<T>> = Vec::new();
    let scale = points.iter().map(|p| norm(p)).fold(T::zero(), T::max);
    while chosen.len() < d + 1 {
        let mut best: Option<(T, usize, Vec<T>)> = None;
        for (i, p) in points.iter().enumerate() {
            let mut v = vector::sub(p, &points[first]);
            reject(&mut v, &basis);
            let n = norm(&v);
            if best.as_ref().map_or(true, |b| n > b.0) {
                best = Some((n, i, v));
            }
        }
        let (n, i, v) = best.expect("nonempty");
        if n <= tol * scale {
            return Err(Error::Certificate("points do not span the space".into()));
        }
        chosen.push(i);
        basis.push(vector::scale(&v, T::one() / n));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_with_jitter_has_twelve_triangles() {
        let mut pts = Vec::new();
        let mut k = 0.0;
        for x in [-1.0, 1.0] {
            for y in [-1.0, 1.0] {
                for z in [-1.0, 1.0] {
                    k += 1.0;
                    pts.push(vec![x + 1e-4 * k, y - 7e-5 * k * k, z + 3e-5 * (k * 5.0f64).sin()]);
                }
            }
        }
        let facets = convex_hull(&pts, 1e-12).unwrap();
        assert_eq!(facets.len(), 12);
        for f in &facets {
            for p in &pts {
                assert!(dot(&f.normal, p) <= f.offset + 1e-9);
            }
        }
    }

    #[test]
    fn interior_points_are_ignored() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![4.0, 0.1],
            vec![0.2, 3.0],
            vec![1.0, 1.0],
            vec![3.9, 3.7],
        ];
        let facets = convex_hull(&pts, 1e-12).unwrap();
        assert_eq!(facets.len(), 4);
        assert!(facets.iter().all(|f| !f.vertices.contains(&3)));
    }
}
