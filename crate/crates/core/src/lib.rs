//! Cone total curvature of graphs in constant-curvature model spaces,
//! constant-curvature developments of geodesic cones, and density-based
//! regularity certificates for soap-film-like surfaces spanning graphs.

pub mod certify;
pub mod cli;
pub mod cone;
pub mod curvature;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod graph;
pub mod spaceform;

pub use error::{Error, Result};
pub use graph::{load_graph, parse_graph, EmbeddedGraph};
pub use spaceform::{Model, Point, SpaceForm, TangentVector};
