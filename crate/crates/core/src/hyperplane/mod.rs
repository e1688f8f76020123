//! Exact nearest induced line in the plane.
//!
//! Points become lines under `(a, b) -> {Y = aX - b}`; the line through two
//! data points becomes the vertex where their dual lines meet, and the
//! query becomes a line `ȳ`. The nearest induced line is dual to a vertex
//! of a triangle of the arrangement crossed by `ȳ`, and those are found by
//! recursing into the cells of a `1/r`-cutting that `ȳ` crosses.
//!
//! A second pass widens `ȳ` into the band of vertices whose primal line is
//! no farther than the best candidate and collects every vertex in it, so
//! the answer is exact even when the first pass misses the optimum.

mod cutting;
mod dual;

pub use cutting::{bounding_box, build_cutting, contains, cut_region, touches, CuttingCell, DEFAULT_R};
pub use dual::{dualize, dualize_point, primal_distance, DualLine, Pt};

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result, Witness};
use crate::geometry::{IndexSubset, NumericPolicy, PointSet, SubsetKind};
use crate::Real;

/// Subproblems with at most this many lines are enumerated pairwise.
const BASE: usize = 16;
const MAX_DEPTH: usize = 64;
/// Random rotations tried before dualizing; the one spreading the
/// x-coordinates most is kept.
const ROTATIONS: usize = 8;
/// Nearest points pooled for the initial bound.
const SEED_POOL: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZoneVertex<T> {
    pub point: [T; 2],
    /// The two lines (data points) meeting here, ascending.
    pub ids: [usize; 2],
}

/// Arrangement vertices collected by a zone or band search.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RefinedZone<T> {
    pub vertices: Vec<ZoneVertex<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperplaneAnswer<T> {
    pub subset: IndexSubset,
    pub distance: T,
    /// Other subsets within tolerance of the optimum.
    pub ties: Vec<IndexSubset>,
    pub zone_candidates: usize,
    pub band_candidates: usize,
}

struct Collector<'a, T> {
    lines: &'a [DualLine<T>],
    query: DualLine<T>,
    /// Band half-width; `None` visits the cells crossed by the query line
    /// and keeps every vertex found there.
    delta: Option<T>,
    r: usize,
    tol: T,
    out: BTreeSet<(usize, usize)>,
}

impl<T: Real> Collector<'_, T> {
    /// Signed excess of `v` over the band: positive above it, negative
    /// below it, zero inside.
    fn band_side(&self, v: Pt<T>) -> i8 {
        let w = self.delta.unwrap_or(T::zero()) * (T::one() + v[0] * v[0]).sqrt();
        let h = self.query.height(v);
        let t = self.tol * self.query.scale_at(v);
        if h > w + t {
            1
        } else if h < -w - t {
            -1
        } else {
            0
        }
    }

    /// Conservative: false only if the cell lies above the band's upper
    /// boundary (a convex curve) or below its lower one.
    fn meets(&self, poly: &[Pt<T>]) -> bool {
        let sides: Vec<i8> = poly.iter().map(|&v| self.band_side(v)).collect();
        !(sides.iter().all(|&s| s == 1) || sides.iter().all(|&s| s == -1))
    }

    fn enumerate(&mut self, ids: &[usize], region: &[Pt<T>]) {
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a + 1..] {
                let Some(v) = self.lines[i].meet(&self.lines[j]) else { continue };
                if !contains(region, v, self.tol) {
                    continue;
                }
                if self.delta.is_some() && self.band_side(v) != 0 {
                    continue;
                }
                self.out.insert((i.min(j), i.max(j)));
            }
        }
    }

    fn visit<R: Rng>(&mut self, ids: &[usize], region: &[Pt<T>], depth: usize, rng: &mut R) -> Result<()> {
        if ids.len() <= BASE || depth >= MAX_DEPTH {
            self.enumerate(ids, region);
            return Ok(());
        }
        for cell in cut_region(self.lines, ids, region, self.r, self.tol, rng)? {
            if !self.meets(&cell.vertices) {
                continue;
            }
            if cell.conflict.len() >= ids.len() {
                self.enumerate(&cell.conflict, &cell.vertices);
            } else {
                self.visit(&cell.conflict, &cell.vertices, depth + 1, rng)?;
            }
        }
        Ok(())
    }

    fn finish(self) -> RefinedZone<T> {
        let vertices = self
            .out
            .into_iter()
            .filter_map(|(i, j)| self.lines[i].meet(&self.lines[j]).map(|point| ZoneVertex { point, ids: [i, j] }))
            .collect();
        RefinedZone { vertices }
    }
}

fn collect<T: Real, R: Rng>(
    query: &DualLine<T>,
    lines: &[DualLine<T>],
    delta: Option<T>,
    r: usize,
    tol: T,
    rng: &mut R,
) -> Result<RefinedZone<T>> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("cutting parameter r = {r} must be at least 2")));
    }
    let mut c = Collector { lines, query: *query, delta, r, tol, out: BTreeSet::new() };
    let ids: Vec<usize> = (0..lines.len()).collect();
    c.visit(&ids, &bounding_box(lines), 0, rng)?;
    Ok(c.finish())
}

/// Vertices of the arrangement of `lines` in the cutting cells crossed by
/// `query`, found by recursive `1/r`-cuttings. A superset of the vertices
/// of the triangles crossed by `query`.
pub fn refined_zone_vertices<T: Real, R: Rng>(
    query: &DualLine<T>,
    lines: &[DualLine<T>],
    r: usize,
    tol: T,
    rng: &mut R,
) -> Result<RefinedZone<T>> {
    collect(query, lines, None, r, tol, rng)
}

/// Every vertex whose primal line lies within `delta` of the primal point
/// of `query` (up to `tol`).
pub fn band_vertices<T: Real, R: Rng>(
    query: &DualLine<T>,
    lines: &[DualLine<T>],
    delta: T,
    r: usize,
    tol: T,
    rng: &mut R,
) -> Result<RefinedZone<T>> {
    if !(delta >= T::zero()) {
        return Err(Error::InvalidArgument("band width must be >= 0".into()));
    }
    collect(query, lines, Some(delta), r, tol, rng)
}

fn rotate<T: Real>(p: &[T], (c, s): (T, T)) -> Vec<T> {
    vec![c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

/// Smallest gap between sorted x-coordinates, with the pair attaining it.
fn min_gap<T: Real>(xs: &[T]) -> (T, usize, usize) {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("finite coordinates"));
    order
        .windows(2)
        .map(|w| (xs[w[1]] - xs[w[0]], w[0], w[1]))
        .fold((T::infinity(), 0, 0), |best, g| if g.0 < best.0 { g } else { best })
}

fn line_distance<T: Real>(p: &[T], q: &[T], y: &[T]) -> T {
    let (ux, uy) = (q[0] - p[0], q[1] - p[1]);
    let (vx, vy) = (y[0] - p[0], y[1] - p[1]);
    (ux * vy - uy * vx).abs() / (ux * ux + uy * uy).sqrt()
}

/// Ties go to the lexicographically smallest pair.
fn offer<T: Real>(best: &mut Option<(T, (usize, usize))>, d: T, ij: (usize, usize)) {
    if best.map_or(true, |(b, bij)| d < b || (d == b && ij < bij)) {
        *best = Some((d, ij));
    }
}

/// Exact nearest line through two points of a planar `S`.
pub fn nearest_hyperplane_exact<T: Real>(set: &PointSet<T>, y: &[T], policy: &NumericPolicy<T>) -> Result<HyperplaneAnswer<T>> {
    policy.validate()?;
    if set.dim() != 2 {
        return Err(Error::UnsupportedDim(set.dim()));
    }
    set.check_query(y)?;
    let n = set.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("{n} points induce no line")));
    }
    let tol = policy.tolerance;
    let scale = set.scale().max(crate::geometry::vector::max_abs(y));
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);

    let mut best_rot = ((T::one(), T::zero()), T::neg_infinity(), 0, 0);
    for _ in 0..ROTATIONS {
        let a = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
        let rot = (a.cos(), a.sin());
        let xs: Vec<T> = set.iter().map(|p| rotate(p, rot)[0]).collect();
        let (gap, i, j) = min_gap(&xs);
        if gap > best_rot.1 {
            best_rot = (rot, gap, i, j);
        }
    }
    let (rot, gap, i, j) = best_rot;
    if gap <= tol * scale {
        return Err(Error::degenerate("two points coincide", Witness::data([i, j])));
    }
    let lines: Vec<DualLine<T>> = set.iter().map(|p| DualLine::of_point(&rotate(p, rot))).collect();
    let query = DualLine::of_point(&rotate(y, rot));
    let dist = |(i, j): (usize, usize)| line_distance(set.point(i), set.point(j), y);

    let mut best: Option<(T, (usize, usize))> = None;
    let mut order: Vec<usize> = (0..n).collect();
    let near: Vec<T> = set.iter().map(|p| crate::geometry::vector::dist(p, y)).collect();
    order.sort_by(|&a, &b| near[a].partial_cmp(&near[b]).expect("finite").then(a.cmp(&b)));
    let pool = &order[..n.min(SEED_POOL)];
    for (a, &i) in pool.iter().enumerate() {
        for &j in &pool[a + 1..] {
            offer(&mut best, dist((i, j)), (i.min(j), i.max(j)));
        }
    }
    let zone = refined_zone_vertices(&query, &lines, DEFAULT_R, tol, &mut rng)?;
    for v in &zone.vertices {
        offer(&mut best, dist((v.ids[0], v.ids[1])), (v.ids[0], v.ids[1]));
    }
    let (bound, _) = best.expect("at least one pair");
    let slack = tol * (bound + scale);
    let band = band_vertices(&query, &lines, bound + slack, DEFAULT_R, tol, &mut rng)?;
    let mut scored: Vec<(T, (usize, usize))> = Vec::with_capacity(band.vertices.len());
    for v in &band.vertices {
        let ij = (v.ids[0], v.ids[1]);
        let d = dist(ij);
        offer(&mut best, d, ij);
        scored.push((d, ij));
    }
    let (distance, (i, j)) = best.expect("at least one pair");
    let mut ties = Vec::new();
    for (d, ij) in scored {
        if ij != (i, j) && d - distance <= tol * scale {
            ties.push(IndexSubset::new(vec![ij.0, ij.1], SubsetKind::Affine)?);
        }
    }
    Ok(HyperplaneAnswer {
        subset: IndexSubset::new(vec![i, j], SubsetKind::Affine)?,
        distance,
        ties,
        zone_candidates: zone.vertices.len(),
        band_candidates: band.vertices.len(),
    })
}
