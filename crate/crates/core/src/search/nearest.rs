use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::vector::dist;
use crate::geometry::{
    affine_hull_of, dist_point_to_flat, dist_point_to_simplex_of, perturb, IndexSubset, NumericPolicy, PointSet,
    SubsetKind,
};
use crate::metric::{build_polytope, ApproxPolytope};
use crate::util::for_each_combination;
use crate::Real;

use super::shoot::Shooter;
use super::{check_problem, hull_points};

/// Extra nearest neighbours pooled when seeding the initial bound.
const SEED_POOL: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatAnswer<T> {
    pub subset: IndexSubset,
    /// Gauge distance `d_Q` found by the search.
    pub gauge: T,
    /// Euclidean distance from the query to the returned flat.
    pub euclid: T,
    pub faces: usize,
    pub faces_hit: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexAnswer<T> {
    /// Between one and `k` points.
    pub subset: IndexSubset,
    pub gauge: T,
    pub euclid: T,
    pub faces: usize,
    pub faces_hit: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    pub flagged: Vec<usize>,
    pub positive: bool,
}

fn by_distance<T: Real>(set: &PointSet<T>, y: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..set.len()).collect();
    let dists: Vec<T> = set.iter().map(|p| dist(p, y)).collect();
    order.sort_by(|&a, &b| dists[a].partial_cmp(&dists[b]).expect("finite").then(a.cmp(&b)));
    order
}

/// Point of `S` nearest to `y` under the gauge, with its distance.
fn nearest_point<T: Real>(q: &ApproxPolytope<T>, set: &PointSet<T>, y: &[T]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (i, p) in set.iter().enumerate() {
        let g = q.distance(y, p);
        if g < best.1 {
            best = (i, g);
        }
    }
    best
}

fn spanning<T: Real>(set: &PointSet<T>, ids: &[usize], kind: SubsetKind) -> Vec<Vec<T>> {
    let mut pts: Vec<Vec<T>> = Vec::with_capacity(ids.len() + 1);
    if kind == SubsetKind::Linear {
        pts.push(vec![T::zero(); set.dim()]);
    }
    pts.extend(ids.iter().map(|&i| set.point(i).to_vec()));
    pts
}

fn euclid_distance<T: Real>(set: &PointSet<T>, y: &[T], ids: &[usize], kind: SubsetKind, tol: T) -> Result<T> {
    let pts = spanning(set, ids, kind);
    match kind {
        SubsetKind::Convex => Ok(dist_point_to_simplex_of(y, &pts, tol)?.0),
        _ => {
            let flat = affine_hull_of(&pts, tol)?;
            Ok(dist_point_to_flat(y, &flat)?.0)
        }
    }
}

/// Best Euclidean distance over subsets of sizes `sizes` drawn from the
/// points nearest to `y`; degenerate subsets are skipped.
fn pooled_best<T: Real>(
    set: &PointSet<T>,
    y: &[T],
    order: &[usize],
    sizes: std::ops::RangeInclusive<usize>,
    kind: SubsetKind,
    tol: T,
) -> Option<(T, Vec<usize>)> {
    let pool = &order[..order.len().min(sizes.end() + SEED_POOL)];
    let mut best: Option<(T, Vec<usize>)> = None;
    for size in sizes {
        for_each_combination::<()>(pool.len(), size, |c| {
            let mut ids: Vec<usize> = c.iter().map(|&i| pool[i]).collect();
            ids.sort_unstable();
            if let Ok(e) = euclid_distance(set, y, &ids, kind, tol) {
                if best.as_ref().map_or(true, |(b, bi)| e < *b || (e == *b && ids < *bi)) {
                    best = Some((e, ids));
                }
            }
            ControlFlow::Continue(())
        });
    }
    best
}

fn working_set<T: Real>(set: &PointSet<T>, policy: &NumericPolicy<T>) -> PointSet<T> {
    if policy.perturbation > T::zero() {
        perturb(set, policy.perturbation, policy.seed)
    } else {
        set.clone()
    }
}

fn face_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

struct Incumbent<T> {
    gauge: T,
    ids: Vec<usize>,
}

impl<T: Real> Incumbent<T> {
    /// Ties go to the lexicographically smallest subset.
    fn offer(&mut self, gauge: T, ids: &[usize]) -> bool {
        if gauge < self.gauge || (gauge == self.gauge && ids < self.ids.as_slice()) {
            self.gauge = gauge;
            self.ids = ids.to_vec();
            true
        } else {
            false
        }
    }
}

/// `(1 + eps)`-approximate nearest induced flat: the `k` points of `S`
/// whose affine hull (or linear span, for [`SubsetKind::Linear`]) is
/// nearest to `y`.
pub fn nearest_flat_approx<T: Real>(
    set: &PointSet<T>,
    y: &[T],
    k: usize,
    eps: T,
    kind: SubsetKind,
    policy: &NumericPolicy<T>,
) -> Result<FlatAnswer<T>> {
    policy.validate()?;
    set.check_query(y)?;
    if kind == SubsetKind::Convex {
        return Err(Error::InvalidArgument("use nearest_simplex_approx for convex hulls".into()));
    }
    let d = set.dim();
    let tol = policy.tolerance;
    let order = by_distance(set, y);
    if kind == SubsetKind::Linear && k == d && set.len() >= k {
        // the span of d independent points is everything
        let best = pooled_best(set, y, &order, k..=k, kind, tol)
            .ok_or_else(|| Error::degenerate("no independent k-subset near the query", crate::Witness::none()))?;
        let subset = IndexSubset::new(best.1, kind)?;
        return Ok(FlatAnswer { subset, gauge: T::zero(), euclid: best.0, faces: 0, faces_hit: 0 });
    }
    check_problem(set, k, kind)?;
    let work = working_set(set, policy);
    let q = build_polytope(d, eps)?;
    let shooter = Shooter::new(&work, kind, k, tol, y);
    let zero = tol * shooter.scale;

    let (p, lambda_point) = nearest_point(&q, &work, y);
    let mut inc = match pooled_best(&work, y, &order, k..=k, kind, tol) {
        Some((e, ids)) if e / q.inradius() <= lambda_point => Incumbent { gauge: e / q.inradius(), ids },
        _ => {
            let mut ids: Vec<usize> = std::iter::once(p).chain(order.iter().copied().filter(|&i| i != p).take(k - 1)).collect();
            ids.sort_unstable();
            Incumbent { gauge: lambda_point, ids }
        }
    };

    let faces = q.faces(d - hull_points(kind, k));
    let mut hit = 0;
    for (fi, face) in faces.iter().enumerate() {
        if inc.gauge <= zero {
            break;
        }
        let dirs = q.face_directions(face);
        let mut rng = face_rng(policy.seed, fi as u64);
        if let Some(r) = shooter.shoot(y, &dirs, inc.gauge, &mut rng)? {
            hit += 1;
            inc.offer(r.lambda, &r.subset.indices);
        }
    }
    let euclid = euclid_distance(set, y, &inc.ids, kind, tol)?;
    Ok(FlatAnswer { subset: IndexSubset::new(inc.ids, kind)?, gauge: inc.gauge, euclid, faces: faces.len(), faces_hit: hit })
}

/// `(1 + eps)`-approximate nearest induced simplex: at most `k` points of
/// `S` whose convex hull is nearest to `y`.
pub fn nearest_simplex_approx<T: Real>(
    set: &PointSet<T>,
    y: &[T],
    k: usize,
    eps: T,
    policy: &NumericPolicy<T>,
) -> Result<SimplexAnswer<T>> {
    policy.validate()?;
    set.check_query(y)?;
    let d = set.dim();
    if k < 2 || k > d {
        return Err(Error::InvalidArgument(format!("k = {k} is out of range for simplices in R^{d}")));
    }
    if set.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    let tol = policy.tolerance;
    let work = working_set(set, policy);
    let q = build_polytope(d, eps)?;
    let order = by_distance(&work, y);

    let (p, lambda_point) = nearest_point(&q, &work, y);
    let mut inc = match pooled_best(&work, y, &order, 1..=k.min(work.len()), SubsetKind::Convex, tol) {
        Some((e, ids)) if e / q.inradius() < lambda_point => Incumbent { gauge: e / q.inradius(), ids },
        _ => Incumbent { gauge: lambda_point, ids: vec![p] },
    };

    let mut total_faces = 0;
    let mut hit = 0;
    for kk in 2..=k.min(work.len()) {
        let shooter = Shooter::new(&work, SubsetKind::Convex, kk, tol, y);
        let zero = tol * shooter.scale;
        let faces = q.faces(d - kk);
        total_faces += faces.len();
        for (fi, face) in faces.iter().enumerate() {
            if inc.gauge <= zero {
                break;
            }
            let dirs = q.face_directions(face);
            let mut rng = face_rng(policy.seed, ((kk as u64) << 32) | fi as u64);
            if let Some(r) = shooter.shoot(y, &dirs, inc.gauge, &mut rng)? {
                hit += 1;
                inc.offer(r.lambda, &r.subset.indices);
            }
        }
    }
    let euclid = euclid_distance(set, y, &inc.ids, SubsetKind::Convex, tol)?;
    Ok(SimplexAnswer {
        subset: IndexSubset::new(inc.ids, SubsetKind::Convex)?,
        gauge: inc.gauge,
        euclid,
        faces: total_faces,
        faces_hit: hit,
    })
}

/// Decides whether some `d + 1` points of `S` lie on a common hyperplane,
/// by searching, for every point, the nearest hyperplane through `d` of
/// the others.
pub fn degeneracy_test<T: Real>(set: &PointSet<T>, policy: &NumericPolicy<T>) -> Result<DegeneracyReport> {
    let d = set.dim();
    if set.len() < d + 1 {
        return Err(Error::InvalidArgument(format!("need at least {} points, got {}", d + 1, set.len())));
    }
    let zero = policy.tolerance * set.scale();
    let mut flagged = BTreeSet::new();
    for id in 0..set.len() {
        let (rest, map) = set.without(id)?;
        match nearest_flat_approx(&rest, set.point(id), d, T::lit(0.5), SubsetKind::Affine, policy) {
            Ok(a) => {
                if a.euclid <= zero {
                    flagged.insert(id);
                }
            }
            Err(Error::DegenerateInput { witness, .. }) if witness.is_intrinsic() => {
                if witness.query {
                    flagged.insert(id);
                }
                flagged.extend(witness.ids.iter().map(|&i| map[i]));
            }
            Err(e) => return Err(e),
        }
    }
    let flagged: Vec<usize> = flagged.into_iter().collect();
    Ok(DegeneracyReport { positive: !flagged.is_empty(), flagged })
}
