//! Exact-arithmetic library for deciding whether a lattice over an order in a
//! rational group algebra is free of a given rank, and for computing explicit
//! generators with a verifiable certificate when it is.
//!
//! The pipeline runs entirely over arbitrary-precision integers and rationals:
//! integer HNF with transformation matrices, number-field and quaternion
//! arithmetic, pseudo-matrices over maximal orders in skew fields, Steinitz
//! forms, conjugation of maximal orders to nice block shape, unit
//! representatives modulo the conductor (including SK1 generators for definite
//! quaternion orders), and the final tuple search over components.

pub mod error;
pub mod exactlin;
pub mod numberfield;
pub mod algebra;
pub mod quaternion;
pub mod latpseudo;
pub mod niceorders;
// pub mod wedderburn;
// pub mod unitreps;
// pub mod freeness;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
