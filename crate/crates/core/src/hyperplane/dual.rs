use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::Real;

pub type Pt<T> = [T; 2];

/// The line `Y = slope * X - offset`, dual to the point `(slope, offset)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualLine<T> {
    pub slope: T,
    pub offset: T,
}

impl<T: Real> DualLine<T> {
    pub fn of_point(p: &[T]) -> Self {
        Self { slope: p[0], offset: p[1] }
    }

    /// The primal point; `DualLine::of_point(&l.point()) == l`.
    pub fn point(&self) -> Pt<T> {
        [self.slope, self.offset]
    }

    pub fn at(&self, x: T) -> T {
        self.slope * x - self.offset
    }

    /// Signed vertical offset of `v` above the line.
    pub fn height(&self, v: Pt<T>) -> T {
        v[1] - self.at(v[0])
    }

    /// Magnitude against which [`Self::height`] is compared.
    pub fn scale_at(&self, v: Pt<T>) -> T {
        (self.slope * v[0]).abs() + self.offset.abs() + v[1].abs() + T::one()
    }

    /// `1`, `-1` or `0` as `v` is above, below or on the line within `tol`.
    pub fn side(&self, v: Pt<T>, tol: T) -> i8 {
        let h = self.height(v);
        let t = tol * self.scale_at(v);
        if h > t {
            1
        } else if h < -t {
            -1
        } else {
            0
        }
    }

    /// Intersection point; `None` for parallel lines.
    pub fn meet(&self, other: &Self) -> Option<Pt<T>> {
        let ds = self.slope - other.slope;
        if ds == T::zero() {
            return None;
        }
        let x = (self.offset - other.offset) / ds;
        Some([x, self.at(x)])
    }
}

/// Euclidean distance from `y` to the primal line dual to vertex `v`.
pub fn primal_distance<T: Real>(query: &DualLine<T>, v: Pt<T>) -> T {
    query.height(v).abs() / (T::one() + v[0] * v[0]).sqrt()
}

/// Dual lines of a planar point set, indexed like the points.
pub fn dualize<T: Real>(set: &PointSet<T>) -> Result<Vec<DualLine<T>>> {
    if set.dim() != 2 {
        return Err(Error::UnsupportedDim(set.dim()));
    }
    Ok(set.iter().map(DualLine::of_point).collect())
}

pub fn dualize_point<T: Real>(y: &[T]) -> Result<DualLine<T>> {
    if y.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: y.len() });
    }
    Ok(DualLine::of_point(y))
}
