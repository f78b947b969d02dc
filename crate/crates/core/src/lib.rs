//! Spectral radius bounds for planar graphs, graphs of bounded genus and
//! hyperbolic tessellations.
//!
//! The crate builds the edge decompositions behind those bounds, the
//! extremal constructions that show they are tight, and certified
//! power-iteration estimates that every closed-form bound can be checked
//! against.

pub mod bounds;
pub mod decompose;
pub mod dense;
pub mod embedding;
pub mod generators;
pub mod graph;
pub mod io;
pub mod spectral;
pub mod tessellation;
pub mod verify;

pub use embedding::{d_of_genus, EmbeddedGraph, Face};
pub use graph::{EdgeLabel, Graph, Orientation, Vertex};
pub use spectral::{rho_power, SpectralEstimate};
