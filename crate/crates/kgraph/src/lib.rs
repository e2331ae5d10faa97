//! Exact-arithmetic analysis of finite higher-rank graphs.
//!
//! A rank-k graph is presented by its skeleton: a k-coloured directed
//! multigraph together with factorisation squares pairing the two colour
//! orders of every bicoloured path. This crate validates such presentations,
//! runs the path calculus they generate (canonical forms, composition,
//! segments, enumeration), decides exhaustiveness and generalised-cycle
//! conditions, classifies when the associated Cuntz-Krieger algebra is AF or
//! finite-dimensional, computes structure invariants (matrix-algebra
//! decompositions, torus ranks, graph traces, K-groups for rank at most
//! two), and builds the standard example graphs.
//!
//! All arithmetic is exact: arbitrary-precision integers for counting and
//! normal forms, rationals for traces. Skeletons are immutable after
//! construction and every operation is a pure function, safe for concurrent
//! readers.

#![forbid(unsafe_code)]

pub mod alignment;
pub mod classify;
pub mod constructions;
pub mod cycles;
pub mod degree;
pub mod error;
pub mod ideals;
pub mod ktheory;
pub mod matrix;
pub mod paths;
pub mod skeleton;
pub mod traces;

pub use degree::Degree;
pub use error::{Error, Result};
pub use paths::{Path, PathSet};
pub use skeleton::{EdgeId, Limits, Skeleton, SkeletonBuilder, ValidationReport, VertexId};
