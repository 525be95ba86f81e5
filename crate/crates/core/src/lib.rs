//! Exact Delone subdivisions, Voronoi cells, covering radii and quantizer
//! constants of lattices given by rational Gram matrices.

pub mod catalog;
pub mod cvp;
pub mod delone;
pub mod error;
pub mod graphlat;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod quantizer;
pub mod rational;
pub mod symmetry;

pub use error::{Error, Result};
pub use linalg::{GramForm, IVector, QMatrix, QVector};
pub use rational::{q, Rational};
