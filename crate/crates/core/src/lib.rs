//! Deciding planar rotation systems of 2-dimensional simplicial complexes.
//!
//! A rotation system picks, for every edge, a cyclic order of the faces around
//! it. It is planar when the induced rotation at every vertex link has genus
//! zero. The decision procedure reduces a complex by local stretching
//! operations to a normal form where existence can be read off directly, then
//! pulls the answer back to the input.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod complex;
pub mod error;
pub mod generators;
pub mod graph;
pub mod ids;
pub mod link;
pub mod obstruction;
pub mod oracle;
pub mod pipeline;
pub mod planarity;
pub mod rotation;
pub mod stretch;

pub use complex::{Dart, DartPos, Edge, TwoComplex};
pub use ids::{DartId, EdgeId, FaceId, VertexId};
