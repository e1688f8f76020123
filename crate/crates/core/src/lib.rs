//! Sparse regression as geometric search.
//!
//! Given `n` points `S` in `R^d`, a query `y` and a sparsity `k`, find the
//! `k` points whose affine hull (sparse affine regression), linear span
//! (sparse linear regression) or convex hull (sparse convex regression) is
//! nearest to `y`.
//!
//! * [`search::nearest_flat_approx`] and [`search::nearest_simplex_approx`]
//!   return `(1 + eps)`-approximate answers in roughly `n^(k-1)` polylog
//!   time, by replacing the Euclidean ball with a polytope, shooting its
//!   faces from `y`, and counting candidate subsets with orthogonal range
//!   counting over circular rank coordinates.
//! * [`hyperplane::nearest_hyperplane_exact`] solves the `k = d = 2` case
//!   exactly through point-line duality and randomized cuttings.
//! * [`oracle`] holds brute-force references for all of the above.
//!
//! Everything is generic over the coordinate type ([`Real`]); the aliases
//! below fix it to `f64`.

pub mod error;
pub mod geometry;
pub mod hull;
pub mod hyperplane;
pub mod linalg;
pub mod lp;
pub mod metric;
pub mod oracle;
pub mod range;
pub mod search;
mod scalar;
pub mod util;

pub use error::{Error, Result, Witness};
pub use geometry::{AffineFlat, IndexSubset, NumericPolicy, PointSet, Side, SubsetKind};
pub use scalar::Real;

pub type PointSet64 = PointSet<f64>;
pub type AffineFlat64 = AffineFlat<f64>;
pub type NumericPolicy64 = NumericPolicy<f64>;
