//! Chemical graphs and the descriptors and constraints built on them.
//!
//! * [`graph`] reads and writes the line-oriented graph format.
//! * [`admission`] filters graphs that the descriptor model cannot express.
//! * [`layers`] splits a graph into interior atoms and fringe trees.
//! * [`fringe`] gives rooted trees their canonical strings.
//! * [`features`] turns graphs into descriptor tables.
//! * [`spec`] parses target specifications, checks their consistency and
//!   verifies whether a graph is an extension of one.

pub mod admission;
pub mod element;
pub mod features;
pub mod fringe;
pub mod graph;
pub mod layers;
pub mod spec;

pub use admission::{check_admissible, filter_admissible, Admission, Rejection};
pub use element::{Element, ValenceTable};
pub use features::{extract_features, DescriptorConfig, Family, FeatureError};
pub use fringe::RootedTree;
pub use graph::{parse_graph, parse_graphs, serialize_graph, serialize_graphs, ChemicalGraph, GraphBuilder, GraphError};
pub use layers::{decompose_two_layer, TwoLayerDecomposition};
pub use spec::{parse_specification, serialize_specification, TargetSpec};
