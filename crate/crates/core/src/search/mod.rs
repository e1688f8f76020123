//! Approximate nearest induced flats and simplices by face shooting.
//!
//! The Euclidean ball is replaced by a polytope `Q` with `B/(1+eps) ⊆ Q ⊆ B`.
//! The nearest induced hull under the gauge of `Q` is first touched by
//! `y + λQ` on some face `e`; for every face, a randomized binary search
//! over `λ` finds the first hull met by `conv({y} ∪ (y + λe))`, counting
//! and sampling candidate subsets with range counting over circular ranks.

mod engine;
mod nearest;
mod predicates;
mod shoot;

pub use nearest::{
    degeneracy_test, nearest_flat_approx, nearest_simplex_approx, DegeneracyReport, FlatAnswer, SimplexAnswer,
};
pub use predicates::{intersects_affine, intersects_convex};
pub use shoot::{ShootResult, ShootStep, CANDIDATE_LIMIT};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{IndexSubset, PointSet, SubsetKind};
use crate::Real;

use engine::Bounds;
use shoot::Shooter;

/// Ordered tuple count; every subset is counted `multiplicity = k!` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub total_ordered: u64,
    pub multiplicity: u64,
}

impl CountResult {
    pub fn total_unordered(&self) -> u64 {
        self.total_ordered / self.multiplicity
    }
}

/// Affine points spanned by `k` data points of this kind.
fn hull_points(kind: SubsetKind, k: usize) -> usize {
    k + (kind == SubsetKind::Linear) as usize
}

fn check_problem<T: Real>(set: &PointSet<T>, k: usize, kind: SubsetKind) -> Result<()> {
    let d = set.dim();
    if k < 2 || hull_points(kind, k) > d {
        return Err(Error::InvalidArgument(format!("k = {k} is out of range for {kind:?} hulls in R^{d}")));
    }
    if set.len() < k {
        return Err(Error::InvalidArgument(format!("{} points cannot form a {k}-subset", set.len())));
    }
    Ok(())
}

fn check_delta<T: Real>(set: &PointSet<T>, k: usize, kind: SubsetKind, delta: &[Vec<T>]) -> Result<()> {
    check_problem(set, k, kind)?;
    let d = set.dim();
    let want = d + 2 - hull_points(kind, k);
    if delta.len() != want {
        return Err(Error::InvalidArgument(format!("query simplex has {} vertices, expected {want}", delta.len())));
    }
    for v in delta {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    Ok(())
}

/// Number of ordered `k`-tuples of `S` whose hull (affine, linear span, or
/// convex, by `kind`) meets `conv(delta)`. Points on a bounding hyperplane
/// are reported as degeneracies.
pub fn count_intersecting<T: Real>(
    set: &PointSet<T>,
    k: usize,
    delta: &[Vec<T>],
    kind: SubsetKind,
    tol: T,
) -> Result<CountResult> {
    check_delta(set, k, kind, delta)?;
    let shooter = Shooter::new(set, kind, k, tol, &delta[0]);
    let engine = shooter.engine(delta, Bounds::Strict);
    let total = engine.tally()?.total;
    let multiplicity = engine.multiplicity();
    if total % multiplicity != 0 {
        return Err(Error::NonDivisibleCount { total, multiplicity });
    }
    Ok(CountResult { total_ordered: total, multiplicity })
}

/// [`count_intersecting`] for convex hulls.
pub fn count_intersecting_convex<T: Real>(set: &PointSet<T>, k: usize, delta: &[Vec<T>], tol: T) -> Result<CountResult> {
    count_intersecting(set, k, delta, SubsetKind::Convex, tol)
}

/// Uniformly random subset among those counted by [`count_intersecting`].
pub fn sample_intersecting<T: Real, R: Rng>(
    set: &PointSet<T>,
    k: usize,
    delta: &[Vec<T>],
    kind: SubsetKind,
    tol: T,
    rng: &mut R,
) -> Result<IndexSubset> {
    check_delta(set, k, kind, delta)?;
    let shooter = Shooter::new(set, kind, k, tol, &delta[0]);
    let engine = shooter.engine(delta, Bounds::Strict);
    let tally = engine.tally()?;
    IndexSubset::new(engine.sample(&tally, rng)?, kind)
}

/// Smallest `λ <= lambda_init` at which `conv({y} ∪ (y + λ face))` meets
/// an induced hull, with the hull attaining it; `None` if there is none.
///
/// `face` holds the vertex vectors of a `(d - K)`-face, where `K` is the
/// number of affine points spanned (`k`, or `k + 1` for linear spans).
#[allow(clippy::too_many_arguments)]
pub fn face_shoot<T: Real, R: Rng>(
    set: &PointSet<T>,
    k: usize,
    y: &[T],
    face: &[Vec<T>],
    lambda_init: T,
    kind: SubsetKind,
    tol: T,
    rng: &mut R,
) -> Result<Option<ShootResult<T>>> {
    set.check_query(y)?;
    if !(lambda_init > T::zero()) {
        return Err(Error::InvalidArgument("initial λ must be positive".into()));
    }
    let probe = crate::metric::QuerySimplex::new(y, face.to_vec(), lambda_init).vertices;
    check_delta(set, k, kind, &probe)?;
    Shooter::new(set, kind, k, tol, y).shoot(y, face, lambda_init, rng)
}
