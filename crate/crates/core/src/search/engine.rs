//! Rank-space counting of the ordered `k`-tuples whose hull meets a query
//! simplex `Δ = conv(B)`.
//!
//! A tuple is `(T, a_{k-1}, a_k)` with a fixed prefix `T`. For each vertex
//! `b_i` the hyperplane `H_i = aff(T ∪ {a_{k-1}} ∪ B \ {b_i})` pivots about
//! the `(d-2)`-flat `aff(T ∪ B \ {b_i})`, so the sidedness of `a_k` is an
//! arc of the circular order around that flat. With `T` fixed, one range
//! counter over the circular ranks answers every `a_{k-1}`.
//!
//! Affine hulls: `a_k` lies in all `H_i^+` or in all `H_i^-`. Convex hulls:
//! `a_k` lies in all `H_i^+`, on the far side of each
//! `G_j = aff(A ∪ B \ {a_j, a_k})` from `a_j`, and on the far side of the
//! fixed hyperplane `aff(T ∪ B)` from `a_{k-1}`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result, Witness};
use crate::geometry::{affine_hull_of, hyperplane_through, side_of_hyperplane, PointSet, Side};
use crate::range::{AxisRange, CircularAxis, HalfTurn, RangeCounter, MAX_AXES};
use crate::util::{arrangements, factorial};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Hull {
    Affine,
    Convex,
}

/// Treatment of points lying on a bounding hyperplane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Bounds {
    /// Excluded, and reported as a degeneracy.
    Strict,
    /// Counted on both sides.
    Closed,
}

pub(crate) struct Engine<'a, T> {
    pub set: &'a PointSet<T>,
    /// Fixed first point of every tuple (the origin, for spans).
    pub pinned: Option<&'a [T]>,
    /// Data points per tuple.
    pub k: usize,
    pub hull: Hull,
    pub bounds: Bounds,
    pub tol: T,
    /// Vertices of `Δ`, the query point first.
    pub delta: &'a [Vec<T>],
}

/// Per-prefix tuple counts, prefixes in lexicographic order.
#[derive(Clone, Debug)]
pub(crate) struct Tally {
    pub prefixes: Vec<Vec<usize>>,
    pub per_prefix: Vec<u64>,
    pub total: u64,
}

struct RefAxis<T> {
    axis: CircularAxis<T>,
    /// Angle of `b_i` (for `H` axes) or `a_j` (for `G` axes).
    reference: T,
}

struct Part {
    /// Live indices stored in this counter.
    members: Vec<usize>,
    /// Per axis, number of members with full rank below each `x in 0..=m`;
    /// `None` when the part holds every live point.
    below: Option<Vec<Vec<u32>>>,
    coords: Vec<u32>,
    dim: usize,
    counter: OnceLock<RangeCounter>,
}

/// Counters over proper subsets of the `H` axes. With an odd number of
/// axes and no point on a bounding hyperplane, inclusion-exclusion over
/// these gives the affine count without the full-dimensional counter.
struct Marginals {
    subsets: Vec<(Vec<usize>, RangeCounter)>,
}

struct Prefix<T> {
    tuple: Vec<usize>,
    live: Vec<usize>,
    h: Vec<RefAxis<T>>,
    g: Vec<RefAxis<T>>,
    parts: Vec<Part>,
    part_of: Vec<u8>,
    marginals: Option<Marginals>,
}

type Arc = (u32, u32);

impl<'a, T: Real> Engine<'a, T> {
    pub fn multiplicity(&self) -> u64 {
        factorial(self.k)
    }

    fn prefix_len(&self) -> usize {
        self.k - 2
    }

    pub fn tally(&self) -> Result<Tally> {
        let prefixes = arrangements(self.set.len(), self.prefix_len());
        let counts: Vec<Result<u64>> = prefixes
            .par_iter()
            .map(|t| {
                let pre = self.prefix(t)?;
                self.prefix_total(&pre)
            })
            .collect();
        let per_prefix = counts.into_iter().collect::<Result<Vec<u64>>>()?;
        let total = per_prefix.iter().sum();
        Ok(Tally { prefixes, per_prefix, total })
    }

    /// Uniform ordered tuple among those counted, as data ids.
    pub fn sample<R: Rng>(&self, tally: &Tally, rng: &mut R) -> Result<Vec<usize>> {
        if tally.total == 0 {
            return Err(Error::EmptyRange);
        }
        let mut u = rng.gen_range(0..tally.total);
        let at = tally
            .per_prefix
            .iter()
            .position(|&c| {
                if u < c {
                    true
                } else {
                    u -= c;
                    false
                }
            })
            .expect("u below the total");
        let pre = self.prefix(&tally.prefixes[at])?;
        for l in 0..pre.live.len() {
            let c = self.pair_count(&pre, l)?;
            if u < c {
                let members = self.members(&pre, l)?;
                if members.len() as u64 != c {
                    return Err(Error::Certificate("membership scan disagrees with the range count".into()));
                }
                let mut tuple = pre.tuple.clone();
                tuple.push(pre.live[l]);
                tuple.push(pre.live[members[u as usize]]);
                return Ok(tuple);
            }
            u -= c;
        }
        Err(Error::Certificate("count stream changed between passes".into()))
    }

    /// Every counted subset, as sorted data ids.
    pub fn enumerate(&self, tally: &Tally) -> Result<BTreeSet<Vec<usize>>> {
        let mut out = BTreeSet::new();
        for (t, &c) in tally.prefixes.iter().zip(&tally.per_prefix) {
            if c == 0 {
                continue;
            }
            let pre = self.prefix(t)?;
            for l in 0..pre.live.len() {
                if self.pair_count(&pre, l)? == 0 {
                    continue;
                }
                for q in self.members(&pre, l)? {
                    let mut s = pre.tuple.clone();
                    s.push(pre.live[l]);
                    s.push(pre.live[q]);
                    s.sort_unstable();
                    out.insert(s);
                }
            }
        }
        Ok(out)
    }

    fn prefix_total(&self, pre: &Prefix<T>) -> Result<u64> {
        let counts: Vec<Result<u64>> =
            (0..pre.live.len()).into_par_iter().with_min_len(128).map(|l| self.pair_count(pre, l)).collect();
        counts.into_iter().sum()
    }

    fn witness(&self, tuple: &[usize], extra: &[usize], pivot_has_query: bool, pivot_has_synthetic: bool) -> Witness {
        let mut w = Witness::data(tuple.iter().chain(extra).copied());
        w.query = pivot_has_query;
        w.synthetic = pivot_has_synthetic || self.pinned.is_some();
        w
    }

    fn prefix(&self, tuple: &[usize]) -> Result<Prefix<T>> {
        let d = self.set.dim();
        let n = self.set.len();
        let tol = self.tol;
        let base: Vec<&[T]> = self.pinned.into_iter().chain(tuple.iter().map(|&i| self.set.point(i))).collect();
        let live: Vec<usize> = (0..n).filter(|i| !tuple.contains(i)).collect();
        let live_pts: Vec<&[T]> = live.iter().map(|&i| self.set.point(i)).collect();
        let nb = self.delta.len();
        // closed bounds only feed candidates to an exact re-check
        let order_tol = match self.bounds {
            Bounds::Strict => tol,
            Bounds::Closed => T::zero(),
        };

        let axis_about = |pivot_pts: Vec<&[T]>, reference: &[T], has_query: bool, has_synth: bool| -> Result<RefAxis<T>> {
            let fail = |reason: &str, extra: &[usize]| {
                Error::degenerate(reason.to_string(), self.witness(tuple, extra, has_query, has_synth))
            };
            let flat = affine_hull_of(&pivot_pts, tol).map_err(|_| fail("pivot flat is rank deficient", &[]))?;
            if flat.dim() + 2 != d {
                return Err(fail("pivot flat is rank deficient", &[]));
            }
            let axis = CircularAxis::new(&live_pts, &live, flat, order_tol).map_err(|e| match e {
                Error::DegenerateInput { reason, witness } => {
                    Error::degenerate(reason, self.witness(tuple, &witness.ids, has_query, has_synth))
                }
                e => e,
            })?;
            let reference = axis
                .angle_of(reference, order_tol)
                .ok_or_else(|| fail("reference point lies on its pivot flat", &[]))?;
            Ok(RefAxis { axis, reference })
        };

        let mut h = Vec::with_capacity(nb);
        for i in 0..nb {
            let mut piv = base.clone();
            piv.extend((0..nb).filter(|&j| j != i).map(|j| self.delta[j].as_slice()));
            let has_query = i != 0;
            let has_synth = (1..nb).any(|j| j != i);
            h.push(axis_about(piv, &self.delta[i], has_query, has_synth)?);
        }
        let mut g = Vec::new();
        if self.hull == Hull::Convex {
            for (j, &aj) in tuple.iter().enumerate() {
                let mut piv: Vec<&[T]> = self.pinned.into_iter().collect();
                piv.extend(tuple.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &t)| self.set.point(t)));
                piv.extend(self.delta.iter().map(|v| v.as_slice()));
                g.push(axis_about(piv, self.set.point(aj), true, nb > 1)?);
            }
        }

        let axes: Vec<&CircularAxis<T>> = h.iter().chain(&g).map(|a| &a.axis).collect();
        let m = live.len();
        let (parts, part_of) = match self.hull {
            Hull::Affine => {
                let coords: Vec<u32> = (0..m).flat_map(|l| axes.iter().map(move |a| a.rank[l])).collect();
                let part = Part { members: (0..m).collect(), below: None, coords, dim: axes.len(), counter: OnceLock::new() };
                (vec![part], vec![0u8; m])
            }
            Hull::Convex => {
                let mut pts = base.clone();
                pts.extend(self.delta.iter().map(|v| v.as_slice()));
                let plane = hyperplane_through(&pts, tol).ok_or_else(|| {
                    Error::degenerate("prefix and query simplex are affinely dependent", self.witness(tuple, &[], true, nb > 1))
                })?;
                let mut part_of = Vec::with_capacity(m);
                for (l, p) in live_pts.iter().enumerate() {
                    part_of.push(match side_of_hyperplane(&plane, p, order_tol)? {
                        Side::Above => 0u8,
                        Side::Below => 1u8,
                        Side::On => return Err(Error::OnHyperplane { id: live[l] }),
                    });
                }
                let parts = (0..2u8)
                    .map(|side| {
                        let members: Vec<usize> = (0..m).filter(|&l| part_of[l] == side).collect();
                        build_part(members, &axes, m)
                    })
                    .collect();
                (parts, part_of)
            }
        };
        let marginals = (self.hull == Hull::Affine && axes.len() % 2 == 1 && axes.len() >= 3).then(|| {
            let axes = &axes;
            let g = axes.len();
            let subsets = (1u32..(1 << g) - 1)
                .filter(|mask| mask.count_ones() >= 2)
                .map(|mask| {
                    let sub: Vec<usize> = (0..g).filter(|i| mask >> i & 1 == 1).collect();
                    let sub_ref = &sub;
                    let coords: Vec<u32> = (0..m).flat_map(|l| sub_ref.iter().map(move |&a| axes[a].rank[l])).collect();
                    let counter = RangeCounter::build(sub.len(), &coords);
                    (sub, counter)
                })
                .collect();
            Marginals { subsets }
        });
        Ok(Prefix { tuple: tuple.to_vec(), live, h, g, parts, part_of, marginals })
    }

    /// Part to query and the rectangles (full doubled rank space) holding
    /// the admissible `a_k` for `a_{k-1} = live[l]`.
    fn rects(&self, pre: &Prefix<T>, l: usize) -> Result<(usize, Vec<Vec<Arc>>)> {
        let m = pre.live.len();
        let on_error = |axis: &CircularAxis<T>, lo: u32, hi: u32| {
            let mut ids = vec![pre.live[l]];
            ids.extend((lo..hi).map(|j| pre.live[axis.order[j as usize % m]]));
            Error::degenerate(
                "point lies on a bounding hyperplane",
                Witness { synthetic: true, ..Witness::data(pre.tuple.iter().copied().chain(ids)) },
            )
        };
        let halves = |ra: &RefAxis<T>| -> Result<(Arc, Arc, HalfTurn)> {
            let r = ra.axis.rank[l] as usize;
            let ((f0, f1), (b0, b1), on) = ra.axis.arcs_from_rank(r);
            let (fwd, bwd) = match self.bounds {
                Bounds::Strict => {
                    if on > 0 {
                        return Err(on_error(&ra.axis, f1, b0));
                    }
                    ((f0, f1), (b0, b1))
                }
                Bounds::Closed => ((f0, b0), (f1, b1)),
            };
            let turn = ra.axis.half_turn(ra.axis.angles[l], ra.reference);
            if turn == HalfTurn::On {
                return Err(Error::degenerate(
                    "reference vertex lies on a bounding hyperplane",
                    Witness { synthetic: true, ..Witness::data(pre.tuple.iter().copied().chain([pre.live[l]])) },
                ));
            }
            Ok((fwd, bwd, turn))
        };
        let mut plus = Vec::with_capacity(pre.h.len() + pre.g.len());
        let mut minus = Vec::with_capacity(pre.h.len());
        for ra in &pre.h {
            let (fwd, bwd, turn) = halves(ra)?;
            if turn == HalfTurn::Forward {
                plus.push(fwd);
                minus.push(bwd);
            } else {
                plus.push(bwd);
                minus.push(fwd);
            }
        }
        match self.hull {
            Hull::Affine => Ok((0, vec![plus, minus])),
            Hull::Convex => {
                for ra in &pre.g {
                    let (fwd, bwd, turn) = halves(ra)?;
                    plus.push(if turn == HalfTurn::Forward { bwd } else { fwd });
                }
                Ok((1 - pre.part_of[l] as usize, vec![plus]))
            }
        }
    }

    /// Affine count from [`Marginals`]; `None` when some axis has points
    /// on its bounding hyperplane.
    fn marginal_count(&self, pre: &Prefix<T>, marg: &Marginals, l: usize) -> Result<Option<u64>> {
        let m = pre.live.len();
        let mut plus = [(0u32, 0u32); MAX_AXES];
        let mut minus = [(0u32, 0u32); MAX_AXES];
        for (i, ra) in pre.h.iter().enumerate() {
            let ((f0, f1), (b0, b1), on) = ra.axis.arcs_from_rank(ra.axis.rank[l] as usize);
            if on > 0 {
                return Ok(None);
            }
            match ra.axis.half_turn(ra.axis.angles[l], ra.reference) {
                HalfTurn::On => return Ok(None),
                HalfTurn::Forward => (plus[i], minus[i]) = ((f0, f1), (b0, b1)),
                HalfTurn::Backward => (plus[i], minus[i]) = ((b0, b1), (f0, f1)),
            }
        }
        let g = pre.h.len();
        let mut twice = 2 * (m as i64 - 1);
        for i in 0..g {
            twice -= (plus[i].1 - plus[i].0) as i64 + (minus[i].1 - minus[i].0) as i64;
        }
        let mut rect = [AxisRange::half_open(0, 0); MAX_AXES];
        for (sub, counter) in &marg.subsets {
            let mut both = 0;
            for arcs in [&plus, &minus] {
                for (j, &a) in sub.iter().enumerate() {
                    rect[j] = AxisRange::half_open(arcs[a].0, arcs[a].1);
                }
                both += counter.count(&rect[..sub.len()])? as i64;
            }
            twice += if sub.len() % 2 == 0 { both } else { -both };
        }
        debug_assert!(twice >= 0 && twice % 2 == 0, "inclusion-exclusion gave {twice}");
        Ok(Some((twice / 2) as u64))
    }

    fn pair_count(&self, pre: &Prefix<T>, l: usize) -> Result<u64> {
        if let Some(marg) = &pre.marginals {
            if let Some(c) = self.marginal_count(pre, marg, l)? {
                return Ok(c);
            }
        }
        let (p, rects) = self.rects(pre, l)?;
        let part = &pre.parts[p];
        let m = pre.live.len() as u32;
        let mut total = 0;
        for rect in rects {
            let mut mapped = [AxisRange::half_open(0, 0); MAX_AXES];
            for (a, &(lo, hi)) in rect.iter().enumerate() {
                mapped[a] = AxisRange::half_open(part.map(a, lo, m), part.map(a, hi, m));
            }
            total += part.counter().count(&mapped[..rect.len()])?;
        }
        Ok(total)
    }

    /// Live indices of the admissible `a_k`, with multiplicity matching
    /// [`Self::pair_count`].
    fn members(&self, pre: &Prefix<T>, l: usize) -> Result<Vec<usize>> {
        let (p, rects) = self.rects(pre, l)?;
        let m = pre.live.len() as u32;
        let axes: Vec<&CircularAxis<T>> = pre.h.iter().chain(&pre.g).map(|a| &a.axis).collect();
        let inside = |r: u32, (lo, hi): Arc| (r >= lo && r < hi) || (r + m >= lo && r + m < hi);
        let mut out = Vec::new();
        for rect in &rects {
            for &q in &pre.parts[p].members {
                if q != l && rect.iter().zip(&axes).all(|(&arc, ax)| inside(ax.rank[q], arc)) {
                    out.push(q);
                }
            }
        }
        Ok(out)
    }
}

impl Part {
    fn counter(&self) -> &RangeCounter {
        self.counter.get_or_init(|| RangeCounter::build(self.dim, &self.coords))
    }

    fn map(&self, axis: usize, x: u32, m: u32) -> u32 {
        match &self.below {
            None => x,
            Some(below) => {
                let b = &below[axis];
                if x <= m {
                    b[x as usize]
                } else {
                    b[(x - m) as usize] + self.members.len() as u32
                }
            }
        }
    }
}

fn build_part<T: Real>(members: Vec<usize>, axes: &[&CircularAxis<T>], m: usize) -> Part {
    let mut below = Vec::with_capacity(axes.len());
    let mut coords = vec![0u32; members.len() * axes.len()];
    let g = axes.len();
    for (a, axis) in axes.iter().enumerate() {
        let mut mark = vec![false; m];
        for &l in &members {
            mark[axis.rank[l] as usize] = true;
        }
        let mut b = Vec::with_capacity(m + 1);
        let mut acc = 0u32;
        b.push(0);
        for &hit in &mark {
            acc += hit as u32;
            b.push(acc);
        }
        for (i, &l) in members.iter().enumerate() {
            coords[i * g + a] = b[axis.rank[l] as usize];
        }
        below.push(b);
    }
    let counter = OnceLock::from(RangeCounter::build(g, &coords));
    Part { members, below: Some(below), coords: Vec::new(), dim: g, counter }
}
