//! Real dynamics of the cubic Hénon map `f(x, y) = (y, x/2 − y³ + ¾y)`.
//!
//! Exact ℚ(√5) arithmetic and interval enclosures underpin certified orbit
//! classification, region-inclusion checks, invariant-manifold growth and
//! raster approximations of the real Julia sets.

pub mod error;
pub mod exactnum;
pub mod henon;
pub mod regions;
pub mod classify;
pub mod grid;
pub mod julia;
pub mod manifolds;
pub mod parallel;
pub mod raster;
pub mod render;
pub mod verify;

pub use error::{Error, ExactError, Result};
pub use exactnum::{FieldElement, Interval, Rational, Scalar};
