//! Exact computations for twisted mixed Voronoi tilings of graphs and the
//! toric arrangements they index.

pub mod arrangement;
pub mod cli;
pub mod cycles;
pub mod degeneration;
pub mod error;
pub mod field;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod polyhedron;
pub mod render;
pub mod scalar;
pub mod toric;
pub mod voronoi;

pub use error::{Error, Result};
pub use graph::{Graph, OneCochain, OrientedEdge, ZeroCochain};
