//! Finite measured laminations on the hyperbolic plane, ideal polyhedra in
//! anti-de Sitter space, and the discrete earthquakes relating them.

pub mod ads;
pub mod circle;
pub mod circle_map;
pub mod eqgraph;
pub mod error;
pub mod hull;
mod hull3;
pub mod io;
pub mod lamination;
pub mod lm;
pub mod quake;
pub mod real;
pub mod realize;

pub use error::{Error, Result};
pub use real::{Real, Q};
