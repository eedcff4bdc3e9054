//! Exact injective hulls (tight spans) of finite metric spaces.
//!
//! Distances and function values are arbitrary-precision rationals. For
//! integer-valued metrics the hull is computed as an explicit polyhedral
//! complex whose cells are indexed by admissible equality graphs.

pub mod complex;
pub mod error;
mod function;
pub mod graph;
pub mod group;
pub mod hull;
pub mod io;
pub mod metric;
pub mod rational;

pub use error::{Error, Result};
pub use function::{sup_distance, MetricFunction};
pub use metric::{FinMetric, PointId};
pub use rational::Rational;
