//! Orthogonal range counting over ranks, with circular axes.

mod circular;
mod tree;

pub use circular::{circular_ranks, CircularAxis, HalfTurn};
pub use tree::{AxisRange, RangeCounter, MAX_AXES};
