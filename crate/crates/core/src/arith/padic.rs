//! Truncated p-adic integers, censored valuations and Teichmüller lifts.

use std::fmt;

use num_bigint::BigUint;

use super::field::{ExtField, FieldElem};

use crate::error::{Error, Result};
use crate::scalar::{fits_modulus, ExactScalar, ResidueInt};

/// A p-adic valuation known either exactly or only from below.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation<T> {
    Exact(T),
    /// The value vanished at the working precision; the true valuation is at least this bound.
    AtLeast(T),
}

impl<T: ExactScalar> Valuation<T> {
    pub fn bound(&self) -> &T {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Valuation::Exact(_))
    }

    pub fn exact(&self) -> Option<&T> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Adds a known constant, preserving the kind.
    pub fn shift(&self, by: &T) -> Self {
        match self {
            Valuation::Exact(v) => Valuation::Exact(v.clone() + by.clone()),
            Valuation::AtLeast(v) => Valuation::AtLeast(v.clone() + by.clone()),
        }
    }

    /// Valuation of a product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let sum = self.bound().clone() + rhs.bound().clone();
        if self.is_exact() && rhs.is_exact() {
            Valuation::Exact(sum)
        } else {
            Valuation::AtLeast(sum)
        }
    }
}

impl<T: fmt::Display> fmt::Display for Valuation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// An integer modulo `p^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicResidue<I = BigUint> {
    p: u64,
    precision: u32,
    modulus: I,
    value: I,
}

/// `p^n` as a big integer.
pub fn prime_power(p: u64, n: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), n as usize)
}

impl<I: ResidueInt> PadicResidue<I> {
    /// Modulus `p^N` in the representation `I`, if it fits.
    pub fn modulus_for(p: u64, precision: u32) -> Result<I> {
        if precision == 0 {
            return Err(Error::MalformedInput("precision must be positive".into()));
        }
        let m = prime_power(p, precision);
        if !fits_modulus::<I>(&m) {
            return Err(Error::MalformedInput(format!(
                "{p}^{precision} exceeds the fixed-width residue range"
            )));
        }
        Ok(I::from_biguint(&m).expect("checked above"))
    }

    pub fn from_parts(p: u64, precision: u32, modulus: I, value: I) -> Self {
        debug_assert!(value < modulus);
        PadicResidue {
            p,
            precision,
            modulus,
            value,
        }
    }

    pub fn new(p: u64, precision: u32, value: &BigUint) -> Result<Self> {
        let modulus = Self::modulus_for(p, precision)?;
        let reduced = value % modulus.to_biguint();
        Ok(PadicResidue {
            p,
            precision,
            value: I::from_biguint(&reduced).expect("reduced below modulus"),
            modulus,
        })
    }

    pub fn from_i64(p: u64, precision: u32, v: i64) -> Result<Self> {
        let r = Self::new(p, precision, &BigUint::from(v.unsigned_abs()))?;
        Ok(if v < 0 { r.neg() } else { r })
    }

    pub fn zero(p: u64, precision: u32) -> Result<Self> {
        Self::from_i64(p, precision, 0)
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        Self::from_i64(p, precision, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn value(&self) -> &I {
        &self.value
    }

    pub fn modulus(&self) -> &I {
        &self.modulus
    }

    pub fn to_biguint(&self) -> BigUint {
        self.value.to_biguint()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn compatible(&self, rhs: &Self) -> Result<()> {
        if self.p != rhs.p {
            return Err(Error::FieldMismatch(format!(
                "residues over primes {} and {}",
                self.p, rhs.p
            )));
        }
        if self.precision != rhs.precision {
            return Err(Error::PrecisionMismatch {
                p: self.p,
                left: self.precision,
                right: rhs.precision,
            });
        }
        Ok(())
    }

    fn with_value(&self, value: I) -> Self {
        PadicResidue {
            p: self.p,
            precision: self.precision,
            modulus: self.modulus.clone(),
            value,
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        Ok(self.with_value(self.value.add_mod(&rhs.value, &self.modulus)))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        Ok(self.with_value(self.value.sub_mod(&rhs.value, &self.modulus)))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        Ok(self.with_value(self.value.mul_mod(&rhs.value, &self.modulus)))
    }

    pub fn neg(&self) -> Self {
        self.with_value(I::zero().sub_mod(&self.value, &self.modulus))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with_value(self.value.pow_mod(e, &self.modulus))
    }

    pub fn mul_small(&self, k: u64) -> Self {
        let k = I::from_biguint(&(BigUint::from(k) % self.modulus.to_biguint())).expect("reduced");
        self.with_value(self.value.mul_mod(&k, &self.modulus))
    }

    /// Division by a small integer prime to `p`.
    pub fn div_small(&self, k: u64) -> Result<Self> {
        if k % self.p == 0 {
            return Err(Error::NotAUnit(k));
        }
        let m = self.modulus.to_biguint();
        let inv = BigUint::from(k)
            .modinv(&m)
            .ok_or(Error::NotAUnit(k))?;
        let inv = I::from_biguint(&inv).expect("reduced below modulus");
        Ok(self.with_value(self.value.mul_mod(&inv, &self.modulus)))
    }

    /// Reduction to a lower precision.
    pub fn narrow(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(Error::PrecisionMismatch {
                p: self.p,
                left: self.precision,
                right: precision,
            });
        }
        Self::new(self.p, precision, &self.value.to_biguint())
    }

    /// Reduction modulo `p`.
    pub fn residue_mod_p(&self) -> u64 {
        self.value.rem_u64(self.p)
    }

    /// Converts between integer representations.
    pub fn convert<J: ResidueInt>(&self) -> Result<PadicResidue<J>> {
        PadicResidue::<J>::new(self.p, self.precision, &self.value.to_biguint())
    }

    /// Exact valuation if nonzero, otherwise the censoring bound `N`.
    pub fn valuation<T: ExactScalar>(&self) -> Valuation<T> {
        if self.value.is_zero() {
            return Valuation::AtLeast(T::from_int(self.precision as i64));
        }
        let mut v = 0i64;
        let mut cur = self.value.clone();
        while cur.rem_u64(self.p) == 0 {
            cur = cur.div_u64(self.p);
            v += 1;
        }
        Valuation::Exact(T::from_int(v))
    }
}

impl<I: ResidueInt> fmt::Display for PadicResidue<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value.to_biguint(), self.p, self.precision)
    }
}

/// Teichmüller lift of `y` in `F_p` to `Z/p^N`.
///
/// Starts from the naive lift and applies `t -> t^p` exactly `N - 1` times.
pub fn teichmuller<I: ResidueInt>(p: u64, y: u64, precision: u32) -> Result<PadicResidue<I>> {
    let mut t = PadicResidue::<I>::from_i64(p, precision, (y % p) as i64)?;
    for _ in 1..precision {
        t = t.pow(p);
    }
    Ok(t)
}

/// `τ(N(y))^c` for `y` in `field`, zero when `y = 0`.
pub fn char_value<I: ResidueInt>(
    field: &ExtField,
    c: u64,
    y: FieldElem,
    precision: u32,
) -> Result<PadicResidue<I>> {
    field.check(y)?;
    let norm = field.norm(y);
    if norm == 0 {
        return PadicResidue::zero(field.p(), precision);
    }
    Ok(teichmuller::<I>(field.p(), norm, precision)?.pow(c))
}

/// Table of `ω^k mod p^N` for `k < p - 1`, where `ω = τ(h)`.
pub fn teichmuller_powers<I: ResidueInt>(p: u64, h: u64, precision: u32) -> Result<Vec<I>> {
    let omega = teichmuller::<I>(p, h, precision)?;
    let modulus = omega.modulus().clone();
    let mut out = Vec::with_capacity((p - 1) as usize);
    let mut cur = I::one();
    for _ in 0..p - 1 {
        out.push(cur.clone());
        cur = cur.mul_mod(omega.value(), &modulus);
    }
    debug_assert!(cur.is_one() || precision == 0);
    Ok(out)
}
