//! Points, flats, distances and sidedness predicates.

mod flat;
mod position;
mod simplex;
pub mod vector;

pub use flat::{affine_hull, affine_hull_of, dist_point_to_flat, AffineFlat};
pub use position::{perturb, validate_general_position, GeneralPositionReport};
pub use simplex::{dist_point_to_simplex, dist_point_to_simplex_of};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// A set of `n >= 1` points in `R^d`, identified by their position `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Real> PointSet<T> {
    pub fn new(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("point set is empty".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords })
    }

    /// Builds a set from rows, taking the dimension from the first row.
    pub fn from_rows(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        Self::new(dim, points)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, id: usize) -> &[T] {
        &self.coords[id * self.dim..(id + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.iter().map(<[T]>::to_vec).collect()
    }

    /// Largest absolute coordinate, floored at one so that relative
    /// tolerances stay meaningful for sets clustered at the origin.
    pub fn scale(&self) -> T {
        vector::max_abs(&self.coords).max(T::one())
    }

    /// The subset of points with the given ids, in the given order.
    pub fn select(&self, ids: &[usize]) -> Vec<&[T]> {
        ids.iter().map(|&i| self.point(i)).collect()
    }

    /// Returns a copy without point `id`, together with the id map from new
    /// positions back to the original ones.
    pub fn without(&self, id: usize) -> Result<(Self, Vec<usize>)> {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != id).collect();
        let rows = keep.iter().map(|&i| self.point(i).to_vec()).collect();
        Ok((Self::new(self.dim, rows)?, keep))
    }

    pub fn map_points(&self, mut f: impl FnMut(&[T]) -> Vec<T>) -> Self {
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            coords.extend(f(p));
        }
        Self { dim: self.dim, coords }
    }

    pub fn check_query(&self, y: &[T]) -> Result<()> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: y.len() });
        }
        Ok(())
    }
}

/// Which hull of the chosen points a subset stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetKind {
    Affine,
    Convex,
    /// Linear span, i.e. the affine hull of the points and the origin.
    Linear,
}

/// A strictly increasing list of point ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSubset {
    pub indices: Vec<usize>,
    pub kind: SubsetKind,
}

impl IndexSubset {
    pub fn new(mut indices: Vec<usize>, kind: SubsetKind) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated index in {indices:?}")));
        }
        if indices.is_empty() {
            return Err(Error::InvalidArgument("empty subset".into()));
        }
        Ok(Self { indices, kind })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The points spanning the subset's hull. Linear subsets get the origin
    /// prepended.
    pub fn spanning_points<T: Real>(&self, set: &PointSet<T>) -> Vec<Vec<T>> {
        let mut pts: Vec<Vec<T>> = Vec::with_capacity(self.len() + 1);
        if self.kind == SubsetKind::Linear {
            pts.push(vec![T::zero(); set.dim()]);
        }
        pts.extend(self.indices.iter().map(|&i| set.point(i).to_vec()));
        pts
    }
}

/// Every floating-point decision in one place.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPolicy<T> {
    /// Relative tolerance for sign tests and rank checks.
    pub tolerance: T,
    /// Relative magnitude of the optional input perturbation; zero disables it.
    pub perturbation: T,
    pub seed: u64,
}

impl<T: Real> Default for NumericPolicy<T> {
    fn default() -> Self {
        Self { tolerance: T::lit(1e-9), perturbation: T::zero(), seed: 0 }
    }
}

impl<T: Real> NumericPolicy<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance >= T::zero()) || !(self.perturbation >= T::zero()) {
            return Err(Error::InvalidArgument("tolerance and perturbation must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    On,
    Below,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Above => Side::Below,
            Side::On => Side::On,
            Side::Below => Side::Above,
        }
    }
}

/// Classifies `p` against the hyperplane `h[..d]·x + h[d] = 0`.
///
/// The value is compared with `tol * (|normal| * (|p| + 1) + |offset|)`.
pub fn side_of_hyperplane<T: Real>(h: &[T], p: &[T], tol: T) -> Result<Side> {
    let d = p.len();
    if h.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, found: h.len() });
    }
    let normal = &h[..d];
    let nn = vector::norm(normal);
    if nn == T::zero() {
        return Err(Error::ZeroNormal);
    }
    let value = vector::dot(normal, p) + h[d];
    let scale = nn * (vector::norm(p) + T::one()) + h[d].abs();
    Ok(if value.abs() <= tol * scale {
        Side::On
    } else if value > T::zero() {
        Side::Above
    } else {
        Side::Below
    })
}

/// Hyperplane through `d` points, as `d + 1` coefficients `(normal, offset)`
/// with unit normal. `None` when the points are affinely dependent.
pub fn hyperplane_through<T: Real>(points: &[&[T]], tol: T) -> Option<Vec<T>> {
    let d = points.first()?.len();
    if points.len() != d {
        return None;
    }
    let flat = affine_hull_of(points, tol).ok()?;
    let normal = vector::orthogonal_complement(&flat.basis, d).pop()?;
    let offset = -vector::dot(&normal, &flat.base);
    let mut h = normal;
    h.push(offset);
    Some(h)
}
