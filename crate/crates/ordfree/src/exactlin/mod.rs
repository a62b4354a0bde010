//! Exact integer/rational linear algebra: HNF over the integers with
//! transformation matrices, lattices with denominators, generalized indices,
//! trace-form duals and intersections, and short-vector enumeration for
//! positive-definite Gram matrices.

mod intmat;
mod qmat;
mod lattice;
mod shortvec;

pub use intmat::{HnfResult, IntMat};
pub use lattice::ZLattice;
pub use qmat::QMat;
pub use shortvec::short_vectors;

use num::{BigInt, BigRational};

/// Convenience: rational from an integer literal.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Convenience: rational p/q from integer literals.
pub fn qr(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
