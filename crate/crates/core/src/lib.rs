//! Exact certification of the sphere packing and kissing configurations of
//! the E8 and Leech lattices: magic-function sign checks, linear programming
//! bounds on the sphere, association-scheme perturbation arguments and the
//! local optimality inequalities, all in rational arithmetic.
//!
//! The numeric core is generic over [`Scalar`], so the same polynomial and
//! matrix code runs on exact rationals, `f64` and wide binary floats.

pub mod arith;
pub mod bigfloat;
pub mod cert;
pub mod error;
pub mod lattice;
pub mod localopt;
pub mod matrix;
pub mod pipeline;
pub mod ortho;
pub mod radial;
pub mod poly;
pub mod scalar;
pub mod scheme;
pub mod sphere_lp;

pub use arith::interval::RatInterval;
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational number in lowest terms.
pub type Rat = num_rational::BigRational;
/// Univariate polynomial with rational coefficients.
pub type UniPoly = poly::Poly<Rat>;
/// Dense rational matrix.
pub type RatMatrix = matrix::Matrix<Rat>;
