//! Prime and extension finite fields, norms, and Teichmüller lifts into
//! truncated p-adic integers.

pub mod field;
pub mod padic;
pub mod poly;
pub mod prime;

pub use field::{ExtField, FieldConfig, FieldElem};
pub use padic::{char_value, prime_power, teichmuller, PadicResidue, Valuation};
pub use poly::FpPoly;
pub use prime::is_prime;

use crate::error::{Error, Result};

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// `N_{F_q/F_p}(y)` for an element of `field`.
pub fn norm(field: &ExtField, y: FieldElem) -> Result<u64> {
    field.check(y)?;
    Ok(field.norm(y))
}
