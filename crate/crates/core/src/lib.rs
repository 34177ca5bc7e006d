//! Towers of figure-8 graph covers and the Cantor system on their inverse
//! limit.
//!
//! Level `n` of the tower is a wedge of `n` circuits and a loop at a base
//! vertex. Walks through the tower are handled symbolically
//! ([`walk::SymWalk`]), points of the inverse limit are finite-depth
//! cylinder anchors ([`point::PointAnchor`]), and [`scramble`] collects
//! finite-horizon checks of the system's dynamics.

pub mod cli;
pub mod error;
pub mod graph;
pub mod point;
pub mod report;
pub mod scramble;
pub mod tower;
pub mod walk;

pub use error::{Error, Result};
pub use point::{PointAnchor, Thread};
pub use tower::{Tower, TowerConfig, VertexRef};
pub use walk::SymWalk;
