//! Randomized `1/r`-cuttings of line arrangements: the bottom-vertex
//! triangulation of a random sample's arrangement, checked and resampled
//! until no triangle is crossed by more than `n/r` lines.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::Real;

use super::dual::{DualLine, Pt};

pub const DEFAULT_R: usize = 4;
/// Sample size is `SAMPLE_FACTOR * r * ln r`.
const SAMPLE_FACTOR: f64 = 9.0;
const RETRIES: usize = 32;

/// A convex cell of a cutting, with the lines meeting its closure.
#[derive(Clone, Debug, PartialEq)]
pub struct CuttingCell<T> {
    /// Counter-clockwise corners.
    pub vertices: Vec<Pt<T>>,
    pub conflict: Vec<usize>,
}

/// Axis-aligned box holding every vertex of the arrangement, padded twice.
pub fn bounding_box<T: Real>(lines: &[DualLine<T>]) -> Vec<Pt<T>> {
    let mut slopes: Vec<T> = lines.iter().map(|l| l.slope).collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).expect("finite slopes"));
    let gap = slopes.windows(2).map(|w| w[1] - w[0]).fold(T::infinity(), T::min);
    let (lo, hi) = lines.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), l| (lo.min(l.offset), hi.max(l.offset)));
    let max_slope = slopes.iter().fold(T::zero(), |m, s| m.max(s.abs()));
    let max_offset = lo.abs().max(hi.abs());
    let x = if gap > T::zero() && gap.is_finite() { (hi - lo) / gap } else { T::zero() };
    let two = T::lit(2.0);
    let x = two * x + T::one();
    let y = two * (max_slope * x + max_offset) + T::one();
    vec![[-x, -y], [x, -y], [x, y], [-x, y]]
}

/// True when the line meets the closed polygon.
pub fn touches<T: Real>(line: &DualLine<T>, poly: &[Pt<T>], tol: T) -> bool {
    let (mut above, mut below) = (true, true);
    for &v in poly {
        match line.side(v, tol) {
            1 => below = false,
            -1 => above = false,
            _ => return true,
        }
    }
    !(above || below)
}

/// True when the line separates two corners of the polygon strictly.
fn crosses<T: Real>(line: &DualLine<T>, poly: &[Pt<T>], tol: T) -> bool {
    let (mut up, mut down) = (false, false);
    for &v in poly {
        match line.side(v, tol) {
            1 => up = true,
            -1 => down = true,
            _ => {}
        }
    }
    up && down
}

/// Splits a convex polygon by a line into its parts above and below;
/// `None` when the line does not cross the interior.
fn split<T: Real>(poly: &[Pt<T>], line: &DualLine<T>, tol: T) -> Option<(Vec<Pt<T>>, Vec<Pt<T>>)> {
    let sides: Vec<i8> = poly.iter().map(|&v| line.side(v, tol)).collect();
    if !sides.contains(&1) || !sides.contains(&-1) {
        return None;
    }
    let (mut up, mut down) = (Vec::new(), Vec::new());
    let m = poly.len();
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let (sp, sq) = (sides[i], sides[(i + 1) % m]);
        if sp >= 0 {
            up.push(p);
        }
        if sp <= 0 {
            down.push(p);
        }
        if sp * sq < 0 {
            let (hp, hq) = (line.height(p), line.height(q));
            let t = hp / (hp - hq);
            let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            up.push(x);
            down.push(x);
        }
    }
    Some((up, down))
}

fn area2<T: Real>(a: Pt<T>, b: Pt<T>, c: Pt<T>) -> T {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Fan triangulation of a convex polygon from its lowest corner; slivers
/// are dropped.
fn fan<T: Real>(poly: &[Pt<T>], tol: T) -> Vec<Vec<Pt<T>>> {
    let m = poly.len();
    let b = (0..m)
        .min_by(|&i, &j| {
            let (p, q) = (poly[i], poly[j]);
            (p[1], p[0]).partial_cmp(&(q[1], q[0])).expect("finite corners")
        })
        .expect("nonempty polygon");
    let scale = poly.iter().fold(T::one(), |s, v| s.max(v[0].abs()).max(v[1].abs()));
    (1..m.saturating_sub(1))
        .map(|i| vec![poly[b], poly[(b + i) % m], poly[(b + i + 1) % m]])
        .filter(|t| area2(t[0], t[1], t[2]).abs() > tol * scale * scale)
        .collect()
}

/// Faces of the arrangement of `sample` inside `region`.
fn faces<T: Real>(lines: &[DualLine<T>], sample: &[usize], region: &[Pt<T>], tol: T) -> Vec<Vec<Pt<T>>> {
    let mut out = vec![region.to_vec()];
    for &s in sample {
        let mut next = Vec::with_capacity(out.len() * 2);
        for f in out {
            match split(&f, &lines[s], tol) {
                Some((a, b)) => {
                    next.push(a);
                    next.push(b);
                }
                None => next.push(f),
            }
        }
        out = next;
    }
    out
}

/// `1/r`-cutting of the lines `ids` inside the convex `region`. Conflict
/// lists hold every line meeting a closed cell; only lines crossing a
/// cell's interior count towards the `n/r` bound.
pub fn cut_region<T: Real, R: Rng>(
    lines: &[DualLine<T>],
    ids: &[usize],
    region: &[Pt<T>],
    r: usize,
    tol: T,
    rng: &mut R,
) -> Result<Vec<CuttingCell<T>>> {
    let n = ids.len();
    if n <= r {
        return Ok(vec![CuttingCell { vertices: region.to_vec(), conflict: ids.to_vec() }]);
    }
    let rf = r as f64;
    let want = ((SAMPLE_FACTOR * rf * rf.ln()).ceil() as usize).clamp(1, n);
    for _ in 0..RETRIES {
        let picked: Vec<usize> = sample(rng, n, want).into_iter().map(|i| ids[i]).collect();
        let mut cells = Vec::new();
        let mut ok = true;
        for face in faces(lines, &picked, region, tol) {
            for tri in fan(&face, tol) {
                let crossing = ids.iter().filter(|&&i| crosses(&lines[i], &tri, tol)).count();
                if crossing * r > n {
                    ok = false;
                    break;
                }
                let conflict = ids.iter().copied().filter(|&i| touches(&lines[i], &tri, tol)).collect();
                cells.push(CuttingCell { vertices: tri, conflict });
            }
            if !ok {
                break;
            }
        }
        if ok {
            return Ok(cells);
        }
    }
    Err(Error::CuttingFailure { retries: RETRIES })
}

/// `1/r`-cutting of all `lines` inside their [`bounding_box`].
pub fn build_cutting<T: Real, R: Rng>(lines: &[DualLine<T>], r: usize, tol: T, rng: &mut R) -> Result<Vec<CuttingCell<T>>> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("cutting parameter r = {r} must be at least 2")));
    }
    let ids: Vec<usize> = (0..lines.len()).collect();
    cut_region(lines, &ids, &bounding_box(lines), r, tol, rng)
}

/// True when `p` lies in the closed convex polygon.
pub fn contains<T: Real>(poly: &[Pt<T>], p: Pt<T>, tol: T) -> bool {
    let m = poly.len();
    (0..m).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        let scale = (b[0] - a[0]).abs().max((b[1] - a[1]).abs()) * ((p[0] - a[0]).abs().max((p[1] - a[1]).abs()) + T::one());
        area2(a, b, p) >= -tol * scale
    })
}
