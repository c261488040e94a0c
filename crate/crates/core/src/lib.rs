//! Weighted graphs, their representation graphs, and the right modules over
//! weighted Leavitt path algebras that representation graphs define.

pub mod algebra;
pub mod branching;
pub mod chen;
pub mod error;
pub mod expr;
pub mod field;
pub mod fixtures;
pub mod graph;
pub mod rep;

pub use error::*;
pub use field::{Field, FieldValue};
pub use graph::{Dir, GraphMorphism, Letter, PathWord, TaggedEdge, WeightedGraph};
pub use rep::{Lift, RepEdge, RepresentationGraph};
