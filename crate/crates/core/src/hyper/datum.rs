use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::prime::{inv_mod, is_prime, mul_mod};
use crate::arith::FpPoly;
use crate::error::{Error, Result};

/// A prime `p` and an unordered list `c` of exponents in `1..=p-2`.
///
/// The exponents are stored sorted, so equality is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HypergeometricDatum {
    p: u64,
    c: Vec<u64>,
}

impl HypergeometricDatum {
    pub fn new(p: u64, mut c: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 3 {
            return Err(Error::InvalidDatum(format!(
                "p = {p} leaves no admissible exponents"
            )));
        }
        if c.is_empty() {
            return Err(Error::InvalidDatum("rank must be at least 1".into()));
        }
        if let Some(&bad) = c.iter().find(|&&ci| ci == 0 || ci > p - 2) {
            return Err(Error::InvalidDatum(format!(
                "exponent {bad} outside 1..={}",
                p - 2
            )));
        }
        c.sort_unstable();
        Ok(HypergeometricDatum { p, c })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    /// Rank `n`.
    pub fn rank(&self) -> usize {
        self.c.len()
    }

    /// Exponents `p - 1 - c_i` of the dual system.
    pub fn dual(&self) -> HypergeometricDatum {
        let c = self.c.iter().map(|&ci| self.p - 1 - ci).collect();
        HypergeometricDatum::new(self.p, c).expect("dual exponents stay admissible")
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual() == *self
    }
}

impl fmt::Display for HypergeometricDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.iter().map(u64::to_string).collect();
        write!(f, "p={} c=({})", self.p, c.join(","))
    }
}

pub fn dual_datum(datum: &HypergeometricDatum) -> HypergeometricDatum {
    datum.dual()
}

/// `binom(a, b) mod p` for `a < p`.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = mul_mod(num, (a - i) % p, p);
        den = mul_mod(den, (i + 1) % p, p);
    }
    mul_mod(num, inv_mod(den, p).expect("b < p"), p)
}

/// `binom(a, b) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while b > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        acc = mul_mod(acc, small_binom(ai, bi, p), p);
        a /= p;
        b /= p;
    }
    acc
}

/// `sum_r (-1)^(n r) prod_i binom(e_i, r) X^r` over `F_p`, for arbitrary exponents.
pub fn u_poly_with_exponents(p: u64, exponents: &[u64]) -> FpPoly {
    let n = exponents.len() as u64;
    let top = exponents.iter().copied().min().unwrap_or(0);
    let coeffs = (0..=top)
        .map(|r| {
            let prod = exponents
                .iter()
                .fold(1u64, |acc, &e| mul_mod(acc, binom_mod_p(e, r, p), p));
            if (n * r) % 2 == 1 {
                (p - prod) % p
            } else {
                prod
            }
        })
        .collect();
    FpPoly::new(p, coeffs)
}

/// The mod-p polynomial `u_c` whose roots mark the non-generic points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    poly: FpPoly,
}

impl UPoly {
    pub fn poly(&self) -> &FpPoly {
        &self.poly
    }

    pub fn coeffs(&self) -> &[u64] {
        self.poly.coeffs()
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.poly.eval(x)
    }
}

pub fn u_poly(datum: &HypergeometricDatum) -> UPoly {
    let poly = u_poly_with_exponents(datum.p, &datum.c);
    debug_assert_eq!(poly.coeff(0), 1);
    UPoly { poly }
}

/// Checks `u_{c~}(X) = prod_{j<m} u_c(X)^(p^j)` in `F_p[X]`, where
/// `c~_i = c_i (1 + p + ... + p^(m-1))`.
pub fn u_factorization_check(datum: &HypergeometricDatum, m: u32) -> bool {
    let p = datum.p;
    let repunit: u64 = (0..m).map(|j| p.pow(j)).sum();
    let lifted: Vec<u64> = datum.c.iter().map(|&ci| ci * repunit).collect();
    let lhs = u_poly_with_exponents(p, &lifted);
    let base = u_poly(datum).poly;
    let rhs = (0..m).fold(FpPoly::one(p), |acc, j| acc.mul(&base.pow(p.pow(j))));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(p: u64, c: &[u64]) -> HypergeometricDatum {
        HypergeometricDatum::new(p, c.to_vec()).unwrap()
    }

    fn exact_binom(a: u64, b: u64) -> u128 {
        if b > a {
            return 0;
        }
        let mut acc = 1u128;
        for i in 0..b as u128 {
            acc = acc * (a as u128 - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn lucas_matches_exact_binomials() {
        for p in [2u64, 3, 5, 7] {
            for a in 0..60 {
                for b in 0..=a {
                    assert_eq!(binom_mod_p(a, b, p) as u128, exact_binom(a, b) % p as u128);
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(HypergeometricDatum::new(4, vec![1]).is_err());
        assert!(HypergeometricDatum::new(7, vec![0]).is_err());
        assert!(HypergeometricDatum::new(7, vec![6]).is_err());
        assert!(HypergeometricDatum::new(7, vec![]).is_err());
        assert!(HypergeometricDatum::new(2, vec![1]).is_err());
        assert_eq!(datum(7, &[5, 1, 1]).c(), &[1, 1, 5]);
    }

    #[test]
    fn duality() {
        let d = datum(31, &[6, 12, 18, 24]);
        assert!(d.is_self_dual());
        let e = datum(7, &[1, 5, 1]);
        assert_eq!(e.dual(), datum(7, &[5, 1, 5]));
        assert_eq!(e.dual().dual(), e);
        assert!(!e.is_self_dual());
    }

    #[test]
    fn rank_one_is_binomial_expansion() {
        let p = 11;
        for c in 1..=p - 2 {
            let u = u_poly(&datum(p, &[c]));
            // (1 - X)^c
            let expected = FpPoly::new(p, vec![1, p - 1]).pow(c);
            assert_eq!(u.poly(), &expected);
        }
    }

    #[test]
    fn triple_gap_polynomial_is_linear() {
        for p in [5u64, 7, 11, 13] {
            for c3 in 1..=p - 2 {
                let u = u_poly(&datum(p, &[1, p - 2, c3]));
                assert_eq!(u.coeffs(), &[1, 2 * c3 % p]);
            }
        }
    }

    #[test]
    fn quintic_roots_at_31() {
        let u = u_poly(&datum(31, &[6, 12, 18, 24]));
        assert_eq!(u.coeff0(), 1);
        let roots: Vec<u64> = (0..31).filter(|&x| u.eval(x) == 0).collect();
        assert!(roots.contains(&4) && roots.contains(&17));
    }

    #[test]
    fn factorization_identity_examples() {
        assert!(u_factorization_check(&datum(5, &[1, 3]), 1));
        assert!(u_factorization_check(&datum(5, &[1, 3]), 2));
        assert!(u_factorization_check(&datum(7, &[2, 3, 5]), 3));
    }

    impl UPoly {
        fn coeff0(&self) -> u64 {
            self.poly.coeff(0)
        }
    }
}
