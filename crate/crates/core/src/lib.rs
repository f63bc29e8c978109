//! Infinitesimal rigidity of periodic frameworks on a fixed flat torus.
//!
//! An orbit framework is a gain graph (edges labelled by integer vectors)
//! together with vertex positions and a lattice. This crate computes its
//! rigidity matrix, flexes and stresses in exact rational arithmetic, samples
//! generic ranks, re-gauges gains along spanning trees, checks the counting
//! conditions for generic rigidity and expands finite windows of the periodic
//! cover.

pub mod error;
pub mod linalg;
pub mod graph;
pub mod tgain;
pub mod torus;
pub mod rigidity;
pub mod counts;
pub mod derived;
pub mod document;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
pub use graph::{Edge, Gain, GainGraph};
pub use torus::{OrbitFramework, Torus};
