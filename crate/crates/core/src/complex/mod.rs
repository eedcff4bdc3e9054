//! The polyhedral structure of `E(X)` for integer-valued metrics.

mod build;
mod equality;
pub mod export;
mod subdivision;
mod system;
mod vertices;

pub use build::{build_complex, hull_dimension, Cell, HullComplex};
pub use equality::{equality_graph, parity_analysis, EqualityGraph, ParityComponent, ParityPartition};
pub use subdivision::{barycentric_subdivision, Subdivision};
pub use system::{canonical_form, cell_system, isometry_classes, polytope_system, PairConstraint, PolytopeSystem};
pub use vertices::{enumerate_vertices, grid_size, DEFAULT_BUDGET};
