//! Numerical laboratory for Hilbert geometries of planar convex domains.
//!
//! * [`geometry`]: convex domains and their ray, chord and tangent queries.
//! * [`hilbert`]: Hilbert distance, Finsler norm, Busemann density, areas.
//! * [`cantor`]: Cantor-Lebesgue functions, measures and domains.
//! * [`entropy`]: sphere lengths, ball volumes, gap series, slope fits.
//! * [`tree`]: interval trees over ordered Cantor sets and their embeddings.

pub mod cantor;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod quadrature;
pub mod tree;

pub use error::{Error, Result};
pub use geometry::{ConvexDomain, Point2};
