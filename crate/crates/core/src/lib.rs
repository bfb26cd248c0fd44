//! Convex hulls of large 3D point sets with a linear-time pre-filter.
//!
//! [`filter::run_filter`] discards points that provably cannot be hull
//! vertices; [`hull::schull`] runs a hull engine on the remainder.

// `!(x > t)` is used on purpose so that NaN lands on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod filter;
pub mod geometry;
pub mod hull;

pub use distributions::{generate, DatasetKind, DatasetSpec};
pub use filter::{run_filter, FilterConfig, FilterOutput, FilterStats};
pub use geometry::{HullMesh, Point3};
pub use hull::{gift_wrap, quickhull, schull, validate_hull, FinalAlgorithm, HullConfig, HullError};
