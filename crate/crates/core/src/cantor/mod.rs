//! Generalized Cantor-Lebesgue functions, their derivative measures and the
//! convex domains whose boundary turns according to them.

mod domain;
mod function;
mod measure;

pub use domain::{build_cantor_domain, CantorBoundary, EdgeInfo, MAX_DOMAIN_DEPTH};
pub use function::{CantorFunction, Gap, Piece, PieceKind, Pieces, MAX_DEPTH};
pub use measure::{ahlfors_exponent_fit, derivative_measure, geometric_radii, AhlforsFit, CantorMeasure};
