use std::ops::ControlFlow;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::vector::{self, norm, reject};
use super::PointSet;
use crate::util::{binomial, for_each_combination};
use crate::Real;

/// Affinely dependent subsets found by [`validate_general_position`].
///
/// Subsets are sorted index lists; the query point, when supplied, has
/// index `n` (one past the last data point).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneralPositionReport {
    pub violations: Vec<Vec<usize>>,
    /// False when some subset size was sampled rather than enumerated.
    pub exhaustive: bool,
}

impl GeneralPositionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Subsets enumerated per size before switching to random sampling.
pub const EXHAUSTIVE_BUDGET: u128 = 2_000_000;

/// Reports every `(j + 2)`-subset of `S ∪ {y}`, `j <= level`, lying on a
/// common `j`-flat within tolerance.
pub fn validate_general_position<T: Real>(
    set: &PointSet<T>,
    query: Option<&[T]>,
    level: usize,
    tol: T,
    seed: u64,
) -> GeneralPositionReport {
    let mut pts: Vec<&[T]> = set.iter().collect();
    if let Some(y) = query {
        pts.push(y);
    }
    let n = pts.len();
    let d = set.dim();
    let scale = pts.iter().map(|p| vector::max_abs(p)).fold(T::one(), T::max);
    let mut report = GeneralPositionReport { violations: Vec::new(), exhaustive: true };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for size in 2..=(level + 2).min(d + 1).min(n) {
        let mut check = |ids: &[usize]| {
            let sub: Vec<&[T]> = ids.iter().map(|&i| pts[i]).collect();
            if affinely_dependent(&sub, tol, scale) {
                report.violations.push(ids.to_vec());
            }
        };
        if binomial(n, size) <= EXHAUSTIVE_BUDGET {
            for_each_combination::<()>(n, size, |ids| {
                check(ids);
                ControlFlow::Continue(())
            });
        } else {
            report.exhaustive = false;
            for _ in 0..EXHAUSTIVE_BUDGET {
                let mut ids = sample(&mut rng, n, size).into_vec();
                ids.sort_unstable();
                check(&ids);
            }
        }
    }
    report.violations.sort();
    report.violations.dedup();
    report
}

fn affinely_dependent<T: Real>(pts: &[&[T]], tol: T, scale: T) -> bool {
    let p0 = pts[0];
    let mut basis: Vec<Vec<T>> = Vec::new();
    for p in &pts[1..] {
        let mut v = vector::sub(p, p0);
        reject(&mut v, &basis);
        let n = norm(&v);
        if n <= tol * scale {
            return true;
        }
        basis.push(vector::scale(&v, T::one() / n));
    }
    false
}

/// Shifts every coordinate by an independent uniform offset in
/// `[-rho * scale, rho * scale]`, where `scale` is the set's largest
/// absolute coordinate. Deterministic in `seed`; `rho = 0` is the identity.
pub fn perturb<T: Real>(set: &PointSet<T>, rho: T, seed: u64) -> PointSet<T> {
    if rho == T::zero() {
        return set.clone();
    }
    let amp = (rho * set.scale()).as_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    set.map_points(|p| {
        p.iter()
            .map(|&x| x + T::lit(rng.gen_range(-amp..=amp)))
            .collect()
    })
}
