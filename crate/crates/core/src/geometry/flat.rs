use super::vector::{self, axpy, dot, norm, reject};
use super::{IndexSubset, PointSet};
use crate::error::{Error, Result, Witness};
use crate::Real;

/// An affine subspace stored as one member point plus an orthonormal basis
/// of its direction space.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFlat<T> {
    pub base: Vec<T>,
    pub basis: Vec<Vec<T>>,
    pub source: Option<IndexSubset>,
}

impl<T: Real> AffineFlat<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// Orthogonal projection of `y` onto the flat.
    pub fn project(&self, y: &[T]) -> Vec<T> {
        let diff = vector::sub(y, &self.base);
        let mut foot = self.base.clone();
        for u in &self.basis {
            axpy(&mut foot, dot(&diff, u), u);
        }
        foot
    }

    /// Point `base + sum coeffs[i] * basis[i]`.
    pub fn at(&self, coeffs: &[T]) -> Vec<T> {
        let mut p = self.base.clone();
        for (c, u) in coeffs.iter().zip(&self.basis) {
            axpy(&mut p, *c, u);
        }
        p
    }
}

/// Affine hull of the points of `subset` (linear subsets include the origin).
pub fn affine_hull<T: Real>(set: &PointSet<T>, subset: &IndexSubset, tol: T) -> Result<AffineFlat<T>> {
    let pts = subset.spanning_points(set);
    let mut flat = affine_hull_of(&pts, tol).map_err(|e| match e {
        Error::DegenerateInput { reason, .. } => {
            Error::degenerate(reason, Witness::data(subset.indices.iter().copied()))
        }
        other => other,
    })?;
    flat.source = Some(subset.clone());
    Ok(flat)
}

/// Affine hull by sequential (twice-iterated) Gram-Schmidt on `p_i - p_0`.
///
/// Fails with `DegenerateInput` when a difference vector keeps less than
/// `tol` times the largest difference norm after orthogonalization.
pub fn affine_hull_of<T: Real, P: AsRef<[T]>>(points: &[P], tol: T) -> Result<AffineFlat<T>> {
    let base = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("affine hull of no points".into()))?
        .as_ref()
        .to_vec();
    let d = base.len();
    let diffs: Vec<Vec<T>> = points[1..]
        .iter()
        .map(|p| {
            let p = p.as_ref();
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.len() });
            }
            Ok(vector::sub(p, &base))
        })
        .collect::<Result<_>>()?;
    let scale = diffs
        .iter()
        .map(|v| norm(v))
        .fold(T::zero(), T::max)
        .max(vector::max_abs(&base))
        .max(T::min_positive_value());
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(diffs.len());
    for (i, mut v) in diffs.into_iter().enumerate() {
        reject(&mut v, &basis);
        let n = norm(&v);
        if n <= tol * scale || n == T::zero() {
            return Err(Error::degenerate(
                format!("point {} lies in the affine hull of the previous ones", i + 1),
                Witness::none(),
            ));
        }
        for x in v.iter_mut() {
            *x = *x / n;
        }
        basis.push(v);
    }
    Ok(AffineFlat { base, basis, source: None })
}

/// Euclidean distance from `y` to `flat` and the orthogonal foot.
pub fn dist_point_to_flat<T: Real>(y: &[T], flat: &AffineFlat<T>) -> Result<(T, Vec<T>)> {
    if y.len() != flat.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: flat.ambient_dim(), found: y.len() });
    }
    let foot = flat.project(y);
    Ok((vector::dist(y, &foot), foot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SubsetKind;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn hull_of_segment() {
        let f = affine_hull_of(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]], 1e-9).unwrap();
        assert_eq!(f.base, vec![0.0, 0.0, 0.0]);
        assert_eq!(f.basis, vec![vec![1.0, 0.0, 0.0]]);
    }

    #[test]
    fn collinear_triple_is_degenerate() {
        let set = PointSet::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let sub = IndexSubset::new(vec![0, 1, 2], SubsetKind::Affine).unwrap();
        match affine_hull(&set, &sub, 1e-9) {
            Err(Error::DegenerateInput { witness, .. }) => assert_eq!(witness.ids, vec![0, 1, 2]),
            other => panic!("expected degenerate, got {other:?}"),
        }
    }

    #[test]
    fn unit_simplex_plane() {
        let pts = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let f = affine_hull_of(&pts, 1e-9).unwrap();
        assert_eq!(f.dim(), 2);
        // every point of the flat satisfies x + y + z = 1
        for c in [[0.3, -0.2], [2.0, 1.0], [-1.5, 0.25]] {
            let p = f.at(&c);
            assert!(close(p.iter().sum::<f64>(), 1.0));
        }
        let (d, foot) = dist_point_to_flat(&[0.0, 0.0, 0.0], &f).unwrap();
        assert!(close(d, 1.0 / 3f64.sqrt()));
        assert!(foot.iter().all(|&x| close(x, 1.0 / 3.0)));
    }

    #[test]
    fn distance_examples() {
        let f = affine_hull_of(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]], 1e-9).unwrap();
        let (d, foot) = dist_point_to_flat(&[0.0, 0.0, 1.0], &f).unwrap();
        assert!(close(d, 1.0));
        assert_eq!(foot, vec![0.0, 0.0, 0.0]);

        let g = affine_hull_of(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], 1e-9).unwrap();
        let (d, foot) = dist_point_to_flat(&[0.0, 0.0, 0.0], &g).unwrap();
        assert!(close(d, 0.5f64.sqrt()));
        assert!(close(foot[0], 0.5) && close(foot[1], 0.5) && close(foot[2], 0.0));

        let on = g.at(&[0.7]);
        let (d, foot) = dist_point_to_flat(&on, &g).unwrap();
        assert!(d < 1e-12);
        assert!(vector::dist(&foot, &on) < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let f = affine_hull_of(&[vec![0.0, 0.0], vec![1.0, 0.0]], 1e-9).unwrap();
        assert!(matches!(dist_point_to_flat(&[0.0, 0.0, 0.0], &f), Err(Error::DimensionMismatch { .. })));
    }
}
