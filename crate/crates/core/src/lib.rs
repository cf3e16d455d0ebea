//! Evaluation codes on tori over finite fields.
//!
//! The crate builds the hypersimplex evaluation codes (affine and
//! projective), the square-free degree-at-most-d code, and their Euclidean
//! duals; computes generalized Hamming weight hierarchies by exhaustive
//! canonical-subspace search; and checks the searched values against a
//! closed-form oracle with explicit validity regions, shadow/footprint
//! bounds, and the extremal polynomial families that certify sharpness.
//!
//! Everything is exact integer or exact matrix arithmetic; all constructions
//! are deterministic, so generator matrices and reports are reproducible
//! bit-for-bit.

pub mod bounds;
pub mod codes;
pub mod error;
pub mod gf;
mod linalg;
pub mod poly;
pub mod torus;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
