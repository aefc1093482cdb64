//! Laplacian eigenvalue ratios `λ_2/λ_n` of graphs: spectra, generators, enumeration and
//! numeric checks of the bounds known for unicyclic, low-degree, regular, tree and expander graphs.

pub mod canon;
pub mod config;
pub mod corona;
pub mod edgelist;
pub mod enumerate;
pub mod error;
pub mod expander;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod low_degree;
pub mod regular;
pub mod report;
pub mod suite;
pub mod trees;

pub use config::{Tolerances, TOL};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexSet};
pub use linalg::{eigenratio, Spectrum, SymMatrix};
