//! Polyhedral approximations of the Euclidean ball and their gauges.
//!
//! [`build_polytope`] returns a simplicial polytope `Q` with
//! `B / (1 + eps) ⊆ Q ⊆ B`, so the gauge `d_Q(y, v)` (smallest `λ` with
//! `v ∈ y + λQ`) satisfies `|y - v| <= d_Q(y, v) <= (1 + eps) |y - v|`.

pub mod net;
mod shoot;

pub use shoot::{lambda_of_target, QuerySimplex, Shot, Target};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::vector::{dot, norm, sub};
use crate::hull::convex_hull;
use crate::Real;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// Documented constant in `|vertices| <= VERTEX_CONSTANT * eps^(-(d-1)/2)`.
///
/// Observed ratios for d in {2, 3, 4} and eps in {0.05, 0.1, 0.5} stay
/// below 30 (the largest, 28.3, is d = 4 at eps = 0.5).
pub const VERTEX_CONSTANT: f64 = 64.0;

const MAX_REFINEMENTS: usize = 12;
const JITTER: f64 = 1e-3;
const NET_SEED: u64 = 0x5eed_0f_d0d1e7;

#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeFacet<T> {
    pub vertices: Vec<usize>,
    /// Outward unit normal.
    pub normal: Vec<T>,
    /// Distance of the supporting hyperplane from the origin.
    pub offset: T,
}

/// A simplicial polytope sandwiched between `B / (1 + eps)` and `B`.
#[derive(Clone, Debug)]
pub struct ApproxPolytope<T> {
    dim: usize,
    epsilon: T,
    vertices: Vec<Vec<T>>,
    facets: Vec<PolytopeFacet<T>>,
    /// `faces[j]` lists the `j`-faces as sorted vertex-index lists.
    faces: Vec<Vec<Vec<usize>>>,
    inradius: T,
    max_vertex_norm: T,
}

impl<T: Real> ApproxPolytope<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[PolytopeFacet<T>] {
        &self.facets
    }

    /// All `j`-faces, `0 <= j <= d - 1`.
    pub fn faces(&self, j: usize) -> &[Vec<usize>] {
        &self.faces[j]
    }

    /// Direction vectors of a face.
    pub fn face_directions(&self, face: &[usize]) -> Vec<Vec<T>> {
        face.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Smallest facet offset: the radius of the largest centered ball in Q.
    pub fn inradius(&self) -> T {
        self.inradius
    }

    pub fn max_vertex_norm(&self) -> T {
        self.max_vertex_norm
    }

    /// Polyhedral distance from `y` to `v`.
    pub fn distance(&self, y: &[T], v: &[T]) -> T {
        polyhedral_distance(self, y, v)
    }

    /// Serializable snapshot for plotting and debugging.
    pub fn dump(&self) -> PolytopeDump {
        PolytopeDump {
            dim: self.dim,
            epsilon: self.epsilon.as_f64(),
            inradius: self.inradius.as_f64(),
            vertices: self.vertices.iter().map(|v| v.iter().map(|x| x.as_f64()).collect()).collect(),
            facets: self.facets.iter().map(|f| f.vertices.clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeDump {
    pub dim: usize,
    pub epsilon: f64,
    pub inradius: f64,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Vec<usize>>,
}

/// Builds and certifies a polytope for `(d, eps)`.
///
/// d = 2 uses a regular polygon; d = 3 a subdivided icosahedron; higher
/// dimensions the surface lattice of a cube. For d >= 3 the net is refined
/// until the hull's smallest facet offset reaches `1 / (1 + eps)`.
pub fn build_polytope<T: Real>(d: usize, eps: T) -> Result<ApproxPolytope<T>> {
    let e = eps.as_f64();
    if !(e > 0.0 && e <= 1.0) {
        return Err(Error::InvalidEpsilon(e));
    }
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDim(d));
    }
    let target = 1.0 / (1.0 + e);
    if d == 2 {
        let m = net::polygon_size(e);
        let vertices: Vec<Vec<T>> = net::polygon(m);
        let facets = (0..m)
            .map(|i| facet_from(&vertices, {
                let mut v = vec![i, (i + 1) % m];
                v.sort_unstable();
                v
            }))
            .collect();
        return certify(d, eps, vertices, facets, target);
    }
    let mut last_inradius = 0.0;
    for level in 1..=MAX_REFINEMENTS {
        let dirs = if d == 3 { net::icosphere(level) } else { net::cube_lattice(d, level) };
        let vertices: Vec<Vec<T>> = net::jitter_and_normalize(&dirs, JITTER / level as f64, NET_SEED);
        let hull = convex_hull(&vertices, T::lit(1e-12).max(T::epsilon() * T::lit(16.0)))?;
        let inr = hull.iter().map(|f| f.offset.as_f64()).fold(f64::INFINITY, f64::min);
        last_inradius = inr;
        if inr < target {
            continue;
        }
        // drop net points that ended up inside the hull
        let mut used = vec![usize::MAX; vertices.len()];
        let mut kept = Vec::new();
        for f in &hull {
            for &v in &f.vertices {
                if used[v] == usize::MAX {
                    used[v] = kept.len();
                    kept.push(vertices[v].clone());
                }
            }
        }
        let facets = hull
            .into_iter()
            .map(|f| {
                let mut vs: Vec<usize> = f.vertices.iter().map(|&v| used[v]).collect();
                vs.sort_unstable();
                PolytopeFacet { vertices: vs, normal: f.normal, offset: f.offset }
            })
            .collect();
        return certify(d, eps, kept, facets, target);
    }
    Err(Error::Certificate(format!(
        "no net up to level {MAX_REFINEMENTS} reaches inradius {target} (best {last_inradius})"
    )))
}

fn facet_from<T: Real>(vertices: &[Vec<T>], vs: Vec<usize>) -> PolytopeFacet<T> {
    // d = 2 only: edge between two polygon vertices
    let (a, b) = (&vertices[vs[0]], &vertices[vs[1]]);
    let dir = sub(b, a);
    let mut normal = vec![dir[1], -dir[0]];
    let n = norm(&normal);
    normal.iter_mut().for_each(|x| *x = *x / n);
    let mut offset = dot(&normal, a);
    if offset < T::zero() {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    PolytopeFacet { vertices: vs, normal, offset }
}

fn certify<T: Real>(
    d: usize,
    eps: T,
    vertices: Vec<Vec<T>>,
    facets: Vec<PolytopeFacet<T>>,
    target: f64,
) -> Result<ApproxPolytope<T>> {
    let inradius = facets.iter().map(|f| f.offset).fold(T::infinity(), T::min);
    let max_vertex_norm = vertices.iter().map(|v| norm(v)).fold(T::zero(), T::max);
    if inradius < T::lit(target) {
        return Err(Error::Certificate(format!("inradius {inradius} below {target}")));
    }
    if max_vertex_norm > T::one() {
        return Err(Error::Certificate(format!("vertex norm {max_vertex_norm} above 1")));
    }
    for f in &facets {
        if f.vertices.len() != d {
            return Err(Error::Certificate(format!("facet {:?} is not a simplex", f.vertices)));
        }
        for v in &vertices {
            if dot(&f.normal, v) > f.offset + T::lit(1e-9).max(T::epsilon() * T::lit(64.0)) {
                return Err(Error::Certificate("vertex beyond a facet".into()));
            }
        }
    }
    let mut faces: Vec<Vec<Vec<usize>>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &facets {
            crate::util::for_each_combination::<()>(f.vertices.len(), j + 1, |c| {
                set.insert(c.iter().map(|&i| f.vertices[i]).collect());
                std::ops::ControlFlow::Continue(())
            });
        }
        faces.push(set.into_iter().collect());
    }
    Ok(ApproxPolytope { dim: d, epsilon: eps, vertices, facets, faces, inradius, max_vertex_norm })
}

/// `d_Q(y, v) = max_f n_f . (v - y) / h_f`, clamped at zero.
pub fn polyhedral_distance<T: Real>(q: &ApproxPolytope<T>, y: &[T], v: &[T]) -> T {
    let diff = sub(v, y);
    q.facets
        .iter()
        .map(|f| dot(&f.normal, &diff) / f.offset)
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_for_large_eps() {
        let q: ApproxPolytope<f64> = build_polytope(2, 0.5).unwrap();
        assert_eq!(q.vertices().len(), 4);
        assert!((q.inradius() - 0.5f64.sqrt()).abs() < 1e-12);
        // gauge of the square (±1,0),(0,±1) is the L1 norm
        assert!((q.distance(&[0.0, 0.0], &[1.0, 1.0]) - 2.0).abs() < 1e-12);
        assert_eq!(q.distance(&[0.3, 0.4], &[0.3, 0.4]), 0.0);
    }

    #[test]
    fn octagon_for_tenth() {
        let q: ApproxPolytope<f64> = build_polytope(2, 0.1).unwrap();
        assert_eq!(q.vertices().len(), 8);
        assert_eq!(q.faces(0).len(), 8);
        assert_eq!(q.faces(1).len(), 8);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(build_polytope::<f64>(3, 0.0), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(build_polytope::<f64>(3, 1.5), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(build_polytope::<f64>(1, 0.1), Err(Error::UnsupportedDim(1))));
        assert!(matches!(build_polytope::<f64>(9, 0.1), Err(Error::UnsupportedDim(9))));
    }

    #[test]
    fn three_dimensional_certificate() {
        for eps in [0.05, 0.1, 0.5] {
            let q: ApproxPolytope<f64> = build_polytope(3, eps).unwrap();
            assert!(q.inradius() >= 1.0 / (1.0 + eps));
            assert!(q.max_vertex_norm() <= 1.0);
            // Euler: V - E + F = 2 for a simplicial 3-polytope
            let (v, e, f) = (q.faces(0).len(), q.faces(1).len(), q.faces(2).len());
            assert_eq!(v as i64 - e as i64 + f as i64, 2);
        }
    }

    #[test]
    fn works_in_f32() {
        let q: ApproxPolytope<f32> = build_polytope(3, 0.25f32).unwrap();
        let u = [0.6f32, 0.0, 0.8];
        let g = q.distance(&[0.0; 3], &u);
        assert!(g >= 1.0 - 1e-5 && g <= 1.25 + 1e-5);
    }
}
