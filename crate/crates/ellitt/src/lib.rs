//! Numerical verification engine for elliptic hypergeometric identities.
//!
//! The crate evaluates theta functions, elliptic Gamma functions,
//! partition-pair symbols, elliptic binomial coefficients, skew interpolation
//! functions, and Selberg-type contour integrals at configurable precision,
//! and checks a registry of identities relating them, each with explicit
//! error bounds and negative controls.

pub mod binomial;
pub mod hp;
pub mod interp;
pub mod linalg;
pub mod partitions;
pub mod residue;
pub mod selberg;
pub mod symbols;
pub mod theta;
