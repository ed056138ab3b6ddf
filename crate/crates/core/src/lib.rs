//! Exact empty-triangle statistics for planar point sets.
//!
//! The crate is `no_std` (it needs `alloc`). All combinatorial work runs on
//! integer coordinates with 128-bit orientation determinants, so there is no
//! floating-point tolerance anywhere in the predicates or the enumerator.
//! Floating point only appears in the samplers, the grid machinery and the
//! numerical helpers used by the Monte Carlo laboratory in the `emptri` crate.
//!
//! Modules:
//!
//! - [`geom`]: points, point sets, orientation and containment predicates,
//!   integer affine maps.
//! - [`engine`]: empty-triangle enumeration, degree tables, near pairs.
//! - [`body`]: convex sampling domains and their normalization.
//! - [`sample`]: seeded uniform sampling of point sets.
//! - [`grid`]: mesh squares, occupancy vectors and the independent Poisson model.
//! - [`order_type`]: chirotopes and canonical order-type labels.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature over convex bodies.
//! - [`stats`]: estimators and confidence intervals.
//! - [`rng`]: counter-based random streams.
#![no_std]

extern crate alloc;

pub mod body;
pub mod engine;
mod error;
pub mod geom;
pub mod grid;
pub mod order_type;
pub mod quad;
pub mod rng;
pub mod sample;
pub mod stats;

pub use error::{Error, Result};
pub use geom::{Point, PointSet, Scale};
