//! Group elements and piecewise maps.

pub mod group;
pub mod piecewise;
pub mod pl;

pub use group::GroupElement;
pub use piecewise::{Action, Piece, PiecewiseMap};
pub use pl::{CircleMap, PlMap};
