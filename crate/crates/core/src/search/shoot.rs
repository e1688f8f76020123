//! Randomized binary search for the smallest dilation of one face.

use rand::Rng;

use crate::error::{Error, Result, Witness};
use crate::geometry::{affine_hull_of, IndexSubset, PointSet, SubsetKind};
use crate::metric::{lambda_of_target, QuerySimplex, Target};
use crate::Real;

use super::engine::{Bounds, Engine, Hull, Tally};

/// Candidate subsets at or below which the search enumerates instead of
/// sampling a pivot.
pub const CANDIDATE_LIMIT: u64 = 16;

/// Relative inflation of `λ` when counting, so that the pivot subset
/// itself meets the query simplex with a margin.
const INFLATE: f64 = 1e-6;
const RETRIES: usize = 3;
const STALLS: usize = 3;

/// One round of the search: the current `λ` and the candidate subsets
/// (rounded up) whose dilation is at most it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootStep<T> {
    pub lambda: T,
    pub candidates: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShootResult<T> {
    /// Smallest `λ` at which `conv({y} ∪ (y + λe))` meets an induced hull.
    pub lambda: T,
    pub subset: IndexSubset,
    pub trace: Vec<ShootStep<T>>,
}

pub(crate) struct Shooter<'a, T> {
    pub set: &'a PointSet<T>,
    pub kind: SubsetKind,
    pub k: usize,
    pub tol: T,
    pub scale: T,
    pub origin: Vec<T>,
}

impl<'a, T: Real> Shooter<'a, T> {
    pub fn new(set: &'a PointSet<T>, kind: SubsetKind, k: usize, tol: T, y: &[T]) -> Self {
        let scale = set.scale().max(crate::geometry::vector::max_abs(y));
        Self { set, kind, k, tol, scale, origin: vec![T::zero(); set.dim()] }
    }

    pub fn pinned(&self) -> Option<&[T]> {
        (self.kind == SubsetKind::Linear).then_some(self.origin.as_slice())
    }

    pub fn engine<'b>(&'b self, delta: &'b [Vec<T>], bounds: Bounds) -> Engine<'b, T> {
        Engine {
            set: self.set,
            pinned: self.pinned(),
            k: self.k,
            hull: if self.kind == SubsetKind::Convex { Hull::Convex } else { Hull::Affine },
            bounds,
            tol: self.tol,
            delta,
        }
    }

    /// Exact `λ` of one subset against `face`, `None` on a miss.
    pub fn lambda_of(&self, y: &[T], face: &[Vec<T>], ids: &[usize]) -> Result<Option<T>> {
        let mut pts: Vec<Vec<T>> = self.pinned().map(|o| o.to_vec()).into_iter().collect();
        pts.extend(ids.iter().map(|&i| self.set.point(i).to_vec()));
        let witness = || Witness { synthetic: self.pinned().is_some(), ..Witness::data(ids.iter().copied()) };
        let shot = match self.kind {
            SubsetKind::Convex => {
                affine_hull_of(&pts, self.tol)
                    .map_err(|_| Error::degenerate("subset is affinely dependent", witness()))?;
                lambda_of_target(y, face, Target::Simplex(&pts), self.tol)?
            }
            _ => {
                let flat = affine_hull_of(&pts, self.tol)
                    .map_err(|_| Error::degenerate("subset is affinely dependent", witness()))?;
                lambda_of_target(y, face, Target::Flat(&flat), self.tol)?
            }
        };
        Ok(shot.map(|s| s.lambda))
    }

    /// Smallest `λ` over all induced hulls for one face, given that it is
    /// at most `lambda_init`; `None` when no hull is hit by then.
    pub fn shoot<R: Rng>(&self, y: &[T], face: &[Vec<T>], lambda_init: T, rng: &mut R) -> Result<Option<ShootResult<T>>> {
        let mut eta = T::lit(INFLATE);
        let mut attempt = 0;
        loop {
            match self.search(y, face, lambda_init, eta, rng) {
                Err(Error::DegenerateInput { witness, .. }) if !witness.is_intrinsic() && attempt + 1 < RETRIES => {
                    attempt += 1;
                    eta = eta * T::lit(100.0);
                }
                r => return r,
            }
        }
    }

    fn tally_at(&self, y: &[T], face: &[Vec<T>], lambda: T) -> Result<(Vec<Vec<T>>, Tally)> {
        let delta = QuerySimplex::new(y, face.to_vec(), lambda).vertices;
        let tally = self.engine(&delta, Bounds::Closed).tally()?;
        Ok((delta, tally))
    }

    fn search<R: Rng>(&self, y: &[T], face: &[Vec<T>], lambda_init: T, eta: T, rng: &mut R) -> Result<Option<ShootResult<T>>> {
        let grow = T::one() + eta;
        let mult = crate::util::factorial(self.k);
        let unordered = |t: &Tally| t.total.div_ceil(mult);
        let zero = self.tol * self.scale;

        let mut lambda = lambda_init;
        let (mut delta, mut tally) = self.tally_at(y, face, lambda * grow)?;
        if tally.total == 0 {
            return Ok(None);
        }
        let mut trace = vec![ShootStep { lambda, candidates: unordered(&tally) }];
        let mut stalls = 0;
        let mut best: Option<(T, Vec<usize>)> = None;
        while unordered(&tally) > CANDIDATE_LIMIT && stalls < STALLS {
            let mut pivot = self.engine(&delta, Bounds::Closed).sample(&tally, rng)?;
            pivot.sort_unstable();
            let Some(lp) = self.lambda_of(y, face, &pivot)? else {
                stalls += 1;
                continue;
            };
            if lp <= zero {
                let subset = IndexSubset::new(pivot, self.kind)?;
                trace.push(ShootStep { lambda: lp, candidates: 1 });
                return Ok(Some(ShootResult { lambda: lp, subset, trace }));
            }
            if lp >= lambda {
                stalls += 1;
                continue;
            }
            let (d2, t2) = self.tally_at(y, face, lp * grow)?;
            stalls = if t2.total < tally.total { 0 } else { stalls + 1 };
            lambda = lp;
            best = Some((lp, pivot));
            delta = d2;
            tally = t2;
            trace.push(ShootStep { lambda, candidates: unordered(&tally) });
        }
        for mut ids in self.engine(&delta, Bounds::Closed).enumerate(&tally)? {
            ids.sort_unstable();
            if let Some(l) = self.lambda_of(y, face, &ids)? {
                if best.as_ref().map_or(true, |(b, bi)| l < *b || (l == *b && ids < *bi)) {
                    best = Some((l, ids));
                }
            }
        }
        match best {
            Some((l, ids)) => {
                trace.push(ShootStep { lambda: l, candidates: 1 });
                Ok(Some(ShootResult { lambda: l, subset: IndexSubset::new(ids, self.kind)?, trace }))
            }
            None => Ok(None),
        }
    }
}
