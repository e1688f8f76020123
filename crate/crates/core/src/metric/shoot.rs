use crate::error::{Error, Result, Witness};
use crate::geometry::vector::{axpy, sub};
use crate::geometry::{affine_hull_of, AffineFlat};
use crate::lp::{Lp, LpOutcome, VarBound};
use crate::Real;

/// `Δ = conv({y} ∪ (y + λe))` for a face `e` of the polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct QuerySimplex<T> {
    pub apex: Vec<T>,
    /// Direction vectors of the face.
    pub face: Vec<Vec<T>>,
    pub scale: T,
    /// `apex` followed by `apex + scale * v` for each face direction.
    pub vertices: Vec<Vec<T>>,
}

impl<T: Real> QuerySimplex<T> {
    pub fn new(apex: &[T], face: Vec<Vec<T>>, scale: T) -> Self {
        let mut vertices = Vec::with_capacity(face.len() + 1);
        vertices.push(apex.to_vec());
        for v in &face {
            let mut p = apex.to_vec();
            axpy(&mut p, scale, v);
            vertices.push(p);
        }
        Self { apex: apex.to_vec(), face, scale, vertices }
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn with_scale(&self, scale: T) -> Self {
        Self::new(&self.apex, self.face.clone(), scale)
    }
}

/// What a face is shot at.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a, T> {
    Flat(&'a AffineFlat<T>),
    /// Convex hull of the given points.
    Simplex(&'a [Vec<T>]),
}

/// Result of shooting a face at a target.
#[derive(Clone, Debug, PartialEq)]
pub struct Shot<T> {
    pub lambda: T,
    /// The point of `y + λ* conv(e)` that meets the target.
    pub point: Vec<T>,
}

/// Smallest `λ` such that `conv({y} ∪ (y + λe))` meets the target.
///
/// Solves `min Σ s_i` over `s >= 0` with `y + Σ s_i v_i` in the target.
/// `Ok(None)` means the cone of `y` over `e` misses the target.
pub fn lambda_of_target<T: Real>(y: &[T], face: &[Vec<T>], target: Target<'_, T>, tol: T) -> Result<Option<Shot<T>>> {
    let d = y.len();
    let nf = face.len();
    let (extra, rows): (usize, usize) = match target {
        Target::Flat(f) => {
            if f.ambient_dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: f.ambient_dim() });
            }
            (f.dim(), d)
        }
        Target::Simplex(pts) => {
            affine_hull_of(pts, tol).map_err(|_| {
                Error::degenerate("target simplex is rank deficient", Witness { synthetic: true, ..Witness::none() })
            })?;
            (pts.len(), d + 1)
        }
    };
    let nvar = nf + extra;
    let mut a = vec![vec![T::zero(); nvar]; rows];
    let mut b = vec![T::zero(); rows];
    for r in 0..d {
        for (i, v) in face.iter().enumerate() {
            a[r][i] = v[r];
        }
    }
    let mut bounds = vec![VarBound::NonNegative; nvar];
    match target {
        Target::Flat(f) => {
            // y + V s = base + U t
            let rhs = sub(&f.base, y);
            for r in 0..d {
                for (j, u) in f.basis.iter().enumerate() {
                    a[r][nf + j] = -u[r];
                }
                b[r] = rhs[r];
            }
            for bd in bounds.iter_mut().skip(nf) {
                *bd = VarBound::Free;
            }
        }
        Target::Simplex(pts) => {
            // y + V s = Σ α_j p_j, Σ α_j = 1
            for r in 0..d {
                for (j, p) in pts.iter().enumerate() {
                    a[r][nf + j] = -p[r];
                }
                b[r] = -y[r];
            }
            for j in 0..pts.len() {
                a[d][nf + j] = T::one();
            }
            b[d] = T::one();
        }
    }
    let mut objective = vec![T::zero(); nvar];
    for c in objective.iter_mut().take(nf) {
        *c = T::one();
    }
    let lp = Lp { objective, a, b, bounds };
    match lp.solve(tol) {
        LpOutcome::Optimal { value, x } => {
            let mut point = y.to_vec();
            for (i, v) in face.iter().enumerate() {
                axpy(&mut point, x[i].max(T::zero()), v);
            }
            Ok(Some(Shot { lambda: value.max(T::zero()), point }))
        }
        LpOutcome::Infeasible => Ok(None),
        // the objective is bounded below by zero
        LpOutcome::Unbounded => Err(Error::degenerate("unbounded shooting program", Witness::none())),
    }
}
