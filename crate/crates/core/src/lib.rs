//! Exact p-adic Newton slopes of hypergeometric local systems over finite
//! fields, together with the root-datum calculus used to phrase slope
//! inequalities for general reductive groups.

pub mod arith;
pub mod coweight;
pub mod error;
pub mod hyper;
pub mod polygon;
pub mod record;
pub mod scalar;
pub mod scan;

pub use error::{Error, Result};

/// Arbitrary-precision rationals, the default exact scalar.
pub type Rational = num_rational::BigRational;

/// Residues modulo `p^N` with arbitrary-precision storage.
pub type Residue = arith::PadicResidue<num_bigint::BigUint>;

/// Residues modulo `p^N` stored in a machine word, for `p^N < 2^63`.
pub type Residue64 = arith::PadicResidue<u64>;

/// Descending slope vectors over [`Rational`].
pub type Slopes = polygon::SlopeVector<Rational>;
