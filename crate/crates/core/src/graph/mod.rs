//! Weighted symmetric digraphs, groups, voltage assignments and covers.

pub mod arborescence;
pub mod cover;
pub mod digraph;
pub mod group;
pub mod voltage;

pub use arborescence::{enumerate_arborescences, Arborescences};
pub use cover::{cover_is_connected, derived_cover, tower_connected, tower_layer, Cover};
pub use digraph::{
    validate_graph, Dart, EdgeSpec, Orientation, ValidationReport, Violation, WeightedGraph,
};
pub use group::{FiniteGroup, GroupSpec};
pub use voltage::{FiniteVoltage, ZVoltage};
