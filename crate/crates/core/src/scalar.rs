//! Scalar abstractions shared by every module.
//!
//! Two families of scalars appear in the library:
//!
//! * [`ExactScalar`]: an exact ordered field used for valuations, hull
//!   vertices, slopes and coweights. Any `Ratio<I>` over a signed integer
//!   type qualifies; the crate root fixes [`crate::Rational`] (arbitrary
//!   precision) as the default and tests also exercise `Ratio<i64>`.
//! * [`ResidueInt`]: the integer representation behind truncated p-adic
//!   residues. `u64` is the fixed-width fast path (modulus below `2^63`),
//!   `BigUint` the general one.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// An exact ordered field.
pub trait ExactScalar: Clone + Ord + Debug + Display + Num + Signed + Send + Sync {
    fn from_int(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn is_integral(&self) -> bool;

    /// Denominator in lowest terms, if it fits in a `u64`.
    fn denominator_u64(&self) -> Option<u64>;
}

impl<I> ExactScalar for Ratio<I>
where
    I: Clone + Integer + Signed + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer out of range for scalar"))
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn denominator_u64(&self) -> Option<u64> {
        self.denom().to_u64()
    }
}

/// Nonnegative integers that can carry residues modulo `p^N`.
pub trait ResidueInt: Clone + Debug + Eq + Ord + Zero + One + Send + Sync + 'static {
    /// Largest modulus (exclusive) this representation supports, if bounded.
    const MODULUS_BITS_MAX: Option<u64>;

    fn from_u64(v: u64) -> Self;
    fn from_biguint(v: &BigUint) -> Option<Self>;
    fn to_biguint(&self) -> BigUint;

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self;
    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self;
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self;

    /// `self mod d` for a small divisor.
    fn rem_u64(&self, d: u64) -> u64;
    /// `self / d`, assuming `d` divides `self`.
    fn div_u64(&self, d: u64) -> Self;

    fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        if m.is_one() {
            return Self::zero();
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }
}

impl ResidueInt for u64 {
    const MODULUS_BITS_MAX: Option<u64> = Some(63);

    fn from_u64(v: u64) -> Self {
        v
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        v.to_u64()
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        let s = self + rhs;
        if s >= *m {
            s - m
        } else {
            s
        }
    }

    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            m - (rhs - self)
        }
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        ((*self as u128 * *rhs as u128) % *m as u128) as u64
    }

    fn rem_u64(&self, d: u64) -> u64 {
        self % d
    }

    fn div_u64(&self, d: u64) -> Self {
        self / d
    }
}

impl ResidueInt for BigUint {
    const MODULUS_BITS_MAX: Option<u64> = None;

    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        let s = self + rhs;
        if &s >= m {
            s - m
        } else {
            s
        }
    }

    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            m - (rhs - self)
        }
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        (self * rhs) % m
    }

    fn rem_u64(&self, d: u64) -> u64 {
        (self % d).to_u64().expect("remainder below divisor")
    }

    fn div_u64(&self, d: u64) -> Self {
        self / d
    }
}

/// Whether `modulus` is representable by `I`.
pub fn fits_modulus<I: ResidueInt>(modulus: &BigUint) -> bool {
    match I::MODULUS_BITS_MAX {
        Some(bits) => modulus.bits() <= bits,
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn u64_and_biguint_agree(a in 0u64..(1u64 << 62), b in 0u64..(1u64 << 62), m in 2u64..(1u64 << 62)) {
            let (a, b) = (a % m, b % m);
            let (ba, bb, bm) = (BigUint::from(a), BigUint::from(b), BigUint::from(m));
            prop_assert_eq!(a.mul_mod(&b, &m).to_biguint(), ba.mul_mod(&bb, &bm));
            prop_assert_eq!(a.add_mod(&b, &m).to_biguint(), ba.add_mod(&bb, &bm));
            prop_assert_eq!(a.sub_mod(&b, &m).to_biguint(), ba.sub_mod(&bb, &bm));
            prop_assert_eq!(a.pow_mod(b % 1000, &m).to_biguint(), ba.pow_mod(b % 1000, &bm));
        }
    }

    #[test]
    fn ratio_scalars() {
        type Q64 = Ratio<i64>;
        assert!(Q64::from_int(3).is_integral());
        assert_eq!(Q64::from_frac(6, 4).denominator_u64(), Some(2));
        assert_eq!(Q64::from_frac(6, 4), Q64::new(3, 2));
    }
}
