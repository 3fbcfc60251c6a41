//! Exact symbolic toolkit for polynomials with constant Hessian determinant.

pub mod calculus;
pub mod error;
pub mod fixtures;
pub mod gradmap;
pub mod linalg;
pub mod poly;
pub mod quadform;
pub mod scalar;
pub mod triangulate;
pub mod weights;

pub use error::{Error, Result};
pub use linalg::{ScalarMatrix, Transform};
pub use poly::{parse_poly, Monomial, Poly, Ring};
pub use scalar::{Field, Scalar};
