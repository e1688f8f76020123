//! Static layered range tree for orthogonal range counting on integer
//! coordinates.
//!
//! Every axis up to the second-to-last is a balanced binary tree over the
//! points sorted on that axis, each node carrying an associated structure
//! over the remaining axes. The last two axes form a layered tree: one
//! bisection on the last axis at the root, then fractional-cascading
//! pointers down the tree of the second-to-last axis. Subtrees of at most
//! [`BUCKET`] points are scanned directly.

use crate::error::{Error, Result};

const BUCKET: usize = 24;

/// Largest supported number of axes.
pub const MAX_AXES: usize = 16;

/// One axis of a query rectangle, in doubled rank coordinates `[0, 2m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxisRange {
    pub lo: u32,
    pub hi: u32,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl AxisRange {
    /// `[lo, hi)`.
    pub fn half_open(lo: u32, hi: u32) -> Self {
        Self { lo, hi, lo_open: false, hi_open: true }
    }

    pub fn closed(lo: u32, hi: u32) -> Self {
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    pub fn open(lo: u32, hi: u32) -> Self {
        Self { lo, hi, lo_open: true, hi_open: true }
    }

    /// Integer half-open bounds `[a, b)`.
    fn bounds(&self) -> (u64, u64) {
        let a = self.lo as u64 + self.lo_open as u64;
        let b = self.hi as u64 + (!self.hi_open) as u64;
        (a, b)
    }
}

#[derive(Clone, Debug)]
enum Node {
    /// One-axis counter: sorted keys.
    Last(Vec<u32>),
    /// Flat coordinates (full stride) of a few points.
    Bucket(Vec<u32>),
    Tree {
        min: u32,
        max: u32,
        assoc: Box<Node>,
        left: Box<Node>,
        right: Box<Node>,
    },
    /// The last two axes.
    Layered {
        /// Last-axis keys of every point, sorted.
        keys: Vec<u32>,
        root: Layer,
    },
}

#[derive(Clone, Debug)]
enum Layer {
    /// `(second-to-last, last)` pairs sorted by the last coordinate.
    Leaf(Vec<(u32, u32)>),
    Inner {
        min: u32,
        max: u32,
        /// `to_left[i]`: how many of the first `i` points of this node, in
        /// last-axis order, belong to the left child.
        to_left: Vec<u32>,
        left: Box<Layer>,
        right: Box<Layer>,
    },
}

/// Counts points of a fixed set inside axis-aligned rectangles, with
/// wraparound intervals on every axis.
#[derive(Clone, Debug)]
pub struct RangeCounter {
    dim: usize,
    len: usize,
    root: Option<Node>,
}

impl RangeCounter {
    /// Builds from `points`, a flat row-major array with `dim` coordinates
    /// per point, each coordinate in `0..len`.
    pub fn build(dim: usize, points: &[u32]) -> Self {
        assert!(dim > 0 && dim <= MAX_AXES, "range counter supports 1 to {MAX_AXES} axes");
        let len = points.len() / dim;
        let root = (len > 0).then(|| build_node(points.to_vec(), dim, 0));
        Self { dim, len, root }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of points inside `rect`, with circular wraparound.
    pub fn count(&self, rect: &[AxisRange]) -> Result<u64> {
        if rect.len() != self.dim {
            return Err(Error::InvalidRectangle(format!("{} axes for a {}-d counter", rect.len(), self.dim)));
        }
        if self.root.is_none() {
            return Ok(0);
        }
        let m = self.len as u64;
        let mut pieces = [[(0u32, 0u32); 2]; MAX_AXES];
        let mut sizes = [0usize; MAX_AXES];
        for (i, r) in rect.iter().enumerate() {
            let (a, b) = r.bounds();
            if a > b {
                return Err(Error::InvalidRectangle(format!("reversed bounds {r:?}")));
            }
            if b > 2 * m.max(1) || b - a > m {
                return Err(Error::InvalidRectangle(format!("{r:?} exceeds [0, 2m) or spans more than m = {m}")));
            }
            let split = if b <= m {
                [(a, b), (0, 0)]
            } else if a >= m {
                [(a - m, b - m), (0, 0)]
            } else {
                [(a, m), (0, b - m)]
            };
            for (x, y) in split {
                if x < y {
                    pieces[i][sizes[i]] = (x as u32, y as u32);
                    sizes[i] += 1;
                }
            }
            if sizes[i] == 0 {
                return Ok(0);
            }
        }
        let Some(root) = &self.root else { return Ok(0) };
        let mut q = [(0u32, 0u32); MAX_AXES];
        Ok(product(root, self.dim, &pieces, &sizes, 0, &mut q))
    }

    /// Count for a rectangle of half-open `[lo, hi)` intervals in `0..m`,
    /// without wraparound or validation.
    pub fn count_plain(&self, rect: &[(u32, u32)]) -> u64 {
        match &self.root {
            Some(root) if rect.iter().all(|(a, b)| a < b) => query(root, self.dim, 0, rect),
            _ => 0,
        }
    }
}

/// Sum over the cartesian product of per-axis pieces.
fn product(
    root: &Node,
    dim: usize,
    pieces: &[[(u32, u32); 2]],
    sizes: &[usize],
    axis: usize,
    q: &mut [(u32, u32); MAX_AXES],
) -> u64 {
    if axis == dim {
        return query(root, dim, 0, &q[..dim]);
    }
    let mut total = 0;
    for c in 0..sizes[axis] {
        q[axis] = pieces[axis][c];
        total += product(root, dim, pieces, sizes, axis + 1, q);
    }
    total
}

fn build_node(mut pts: Vec<u32>, dim: usize, axis: usize) -> Node {
    if dim == 1 {
        pts.sort_unstable();
        return Node::Last(pts);
    }
    if axis + 2 == dim {
        let mut pairs: Vec<(u32, u32)> = pts.chunks_exact(dim).map(|p| (p[axis], p[axis + 1])).collect();
        pairs.sort_unstable();
        let (root, keys) = build_layer(&pairs);
        return Node::Layered { keys, root };
    }
    let n = pts.len() / dim;
    if n <= BUCKET {
        return Node::Bucket(pts);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| pts[i * dim + axis]);
    let mut sorted = Vec::with_capacity(pts.len());
    for i in order {
        sorted.extend_from_slice(&pts[i * dim..(i + 1) * dim]);
    }
    pts = sorted;
    build_sorted(&pts, dim, axis)
}

/// `pts` already sorted on `axis`.
fn build_sorted(pts: &[u32], dim: usize, axis: usize) -> Node {
    let n = pts.len() / dim;
    if n <= BUCKET {
        return Node::Bucket(pts.to_vec());
    }
    let half = n / 2;
    Node::Tree {
        min: pts[axis],
        max: pts[(n - 1) * dim + axis],
        assoc: Box::new(build_node(pts.to_vec(), dim, axis + 1)),
        left: Box::new(build_sorted(&pts[..half * dim], dim, axis)),
        right: Box::new(build_sorted(&pts[half * dim..], dim, axis)),
    }
}

/// `pairs` sorted by first coordinate; returns the layer and its points'
/// last coordinates in sorted order.
fn build_layer(pairs: &[(u32, u32)]) -> (Layer, Vec<u32>) {
    if pairs.len() <= BUCKET {
        let mut items = pairs.to_vec();
        items.sort_unstable_by_key(|&(_, l)| l);
        let keys = items.iter().map(|&(_, l)| l).collect();
        return (Layer::Leaf(items), keys);
    }
    let half = pairs.len() / 2;
    let (left, lk) = build_layer(&pairs[..half]);
    let (right, rk) = build_layer(&pairs[half..]);
    let mut keys = Vec::with_capacity(pairs.len());
    let mut to_left = Vec::with_capacity(pairs.len() + 1);
    to_left.push(0);
    let (mut i, mut j) = (0, 0);
    while i < lk.len() || j < rk.len() {
        if j == rk.len() || (i < lk.len() && lk[i] <= rk[j]) {
            keys.push(lk[i]);
            i += 1;
        } else {
            keys.push(rk[j]);
            j += 1;
        }
        to_left.push(i as u32);
    }
    let layer = Layer::Inner {
        min: pairs[0].0,
        max: pairs[pairs.len() - 1].0,
        to_left,
        left: Box::new(left),
        right: Box::new(right),
    };
    (layer, keys)
}

fn query(node: &Node, dim: usize, axis: usize, rect: &[(u32, u32)]) -> u64 {
    match node {
        Node::Last(keys) => {
            let (a, b) = rect[dim - 1];
            (keys.partition_point(|&k| k < b) - keys.partition_point(|&k| k < a)) as u64
        }
        Node::Bucket(pts) => pts
            .chunks_exact(dim)
            .filter(|p| (axis..dim).all(|i| p[i] >= rect[i].0 && p[i] < rect[i].1))
            .count() as u64,
        Node::Tree { min, max, assoc, left, right } => {
            let (a, b) = rect[axis];
            if *max < a || *min >= b {
                0
            } else if *min >= a && *max < b {
                query(assoc, dim, axis + 1, rect)
            } else {
                query(left, dim, axis, rect) + query(right, dim, axis, rect)
            }
        }
        Node::Layered { keys, root } => {
            let (lo, hi) = rect[dim - 1];
            let p = keys.partition_point(|&k| k < lo) as u32;
            let q = keys.partition_point(|&k| k < hi) as u32;
            query_layer(root, rect[dim - 2], lo, hi, p, q)
        }
    }
}

/// Points of `layer` with first coordinate in `[a, b)` among those at
/// last-axis positions `p..q`.
fn query_layer(layer: &Layer, (a, b): (u32, u32), lo: u32, hi: u32, p: u32, q: u32) -> u64 {
    if p >= q {
        return 0;
    }
    match layer {
        Layer::Leaf(items) => items[p as usize..q as usize]
            .iter()
            .filter(|&&(x, l)| x >= a && x < b && l >= lo && l < hi)
            .count() as u64,
        Layer::Inner { min, max, to_left, left, right } => {
            if *max < a || *min >= b {
                0
            } else if *min >= a && *max < b {
                (q - p) as u64
            } else {
                let (lp, lq) = (to_left[p as usize], to_left[q as usize]);
                query_layer(left, (a, b), lo, hi, lp, lq) + query_layer(right, (a, b), lo, hi, p - lp, q - lq)
            }
        }
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn brute(pts: &[u32], dim: usize, m: u32, rect: &[AxisRange]) -> u64 {
        pts.chunks_exact(dim)
            .filter(|p| {
                rect.iter().enumerate().all(|(i, r)| {
                    let (a, b) = r.bounds();
                    [p[i] as u64, (p[i] + m) as u64].iter().any(|&x| x >= a && x < b)
                })
            })
            .count() as u64
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            dim in 1usize..5,
            m in 1u32..300,
            seed in any::<u64>(),
            raw in proptest::collection::vec((0u32..600, 0u32..301, any::<bool>(), any::<bool>()), 4),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut pts = vec![0u32; m as usize * dim];
            for axis in 0..dim {
                let mut perm: Vec<u32> = (0..m).collect();
                for i in (1..perm.len()).rev() {
                    perm.swap(i, rng.gen_range(0..=i));
                }
                for (k, v) in perm.into_iter().enumerate() {
                    pts[k * dim + axis] = v;
                }
            }
            let rc = RangeCounter::build(dim, &pts);
            let rect: Vec<AxisRange> = raw[..dim]
                .iter()
                .map(|&(lo, len, lo_open, hi_open)| {
                    let lo = lo % (2 * m);
                    let len = len % (m + 1);
                    let hi = (lo + len).min(2 * m - 1 + hi_open as u32);
                    AxisRange { lo, hi, lo_open, hi_open: hi_open || hi >= 2 * m }
                })
                .collect();
            match rc.count(&rect) {
                Ok(c) => prop_assert_eq!(c, brute(&pts, dim, m, &rect)),
                Err(_) => {
                    let ok = rect.iter().all(|r| {
                        let (a, b) = r.bounds();
                        a <= b && b <= 2 * m as u64 && b - a <= m as u64
                    });
                    prop_assert!(!ok);
                }
            }
        }
    }
}
