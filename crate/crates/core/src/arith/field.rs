//! Finite fields `F_{p^m}` with deterministic modulus and generator.
//!
//! Elements are encoded as integers `sum c_i p^i` where `c_i` is the
//! coefficient of `X^i` in the canonical representative modulo the field
//! modulus. The lexicographic coefficient order (highest degree first) is
//! the numeric order of this encoding.

use std::fmt;

use super::poly::FpPoly;
use super::prime::{checked_pow, is_prime, mul_mod, prime_factors};
use crate::error::{Error, Result};

/// Default number of elements up to which discrete-log tables are built.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 21;

/// Largest field this module will construct at all.
pub const HARD_FIELD_CAP: u64 = 1 << 40;

/// Environment variable overriding [`DEFAULT_TABLE_LIMIT`].
pub const TABLE_LIMIT_ENV: &str = "ISOSLOPE_TABLE_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldConfig {
    pub table_limit: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            table_limit: DEFAULT_TABLE_LIMIT,
        }
    }
}

impl FieldConfig {
    /// Default configuration, with the table limit taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TABLE_LIMIT_ENV) {
            Ok(raw) => {
                let table_limit = raw.trim().parse::<u64>().map_err(|_| {
                    Error::MalformedInput(format!("{TABLE_LIMIT_ENV}={raw} is not an integer"))
                })?;
                Ok(FieldConfig { table_limit })
            }
            Err(_) => Ok(FieldConfig::default()),
        }
    }
}

/// An element of some [`ExtField`], in base-`p` coefficient encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(pub u64);

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct DlogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug)]
pub struct ExtField {
    p: u64,
    m: u32,
    q: u64,
    modulus: FpPoly,
    generator: FieldElem,
    tables: Option<DlogTables>,
}

impl ExtField {
    pub fn create(p: u64, m: u32) -> Result<Self> {
        Self::create_with(p, m, &FieldConfig::default())
    }

    pub fn create_with(p: u64, m: u32, config: &FieldConfig) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::MalformedInput("extension degree must be at least 1".into()));
        }
        let q = checked_pow(p, m)
            .filter(|&q| q <= HARD_FIELD_CAP)
            .ok_or(Error::DegreeTooLarge {
                p,
                m,
                limit: HARD_FIELD_CAP,
            })?;
        let modulus = smallest_irreducible(p, m);
        let mut field = ExtField {
            p,
            m,
            q,
            modulus,
            generator: FieldElem(0),
            tables: None,
        };
        field.generator = field.find_generator();
        if q <= config.table_limit && q - 1 <= u32::MAX as u64 {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    fn find_generator(&self) -> FieldElem {
        let order = self.q - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .map(FieldElem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_poly(g, order / l) != self.one())
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> DlogTables {
        let order = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = self.one();
        for k in 0..order {
            exp.push(cur.0 as u32);
            log[cur.0 as usize] = k as u32;
            cur = self.mul_poly(cur, self.generator);
        }
        debug_assert_eq!(cur, self.one());
        DlogTables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements `q = p^m`.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn contains(&self, e: FieldElem) -> bool {
        e.0 < self.q
    }

    pub fn check(&self, e: FieldElem) -> Result<FieldElem> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::FieldMismatch(format!(
                "element encoding {} is outside F_{}^{}",
                e.0, self.p, self.m
            )))
        }
    }

    /// Embeds an element of the prime field.
    pub fn from_fp(&self, a: u64) -> FieldElem {
        FieldElem(a % self.p)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.m as usize {
            return Err(Error::FieldMismatch(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.m
            )));
        }
        let mut enc = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::MalformedInput(format!("coefficient {c} not reduced mod {}", self.p)));
            }
            enc = enc * self.p + c;
        }
        Ok(FieldElem(enc))
    }

    pub fn coeffs(&self, e: FieldElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut v = e.0;
        for _ in 0..self.m {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn to_poly(&self, e: FieldElem) -> FpPoly {
        FpPoly::new(self.p, self.coeffs(e))
    }

    fn from_poly(&self, f: &FpPoly) -> FieldElem {
        let mut enc = 0u64;
        for i in (0..self.m as usize).rev() {
            enc = enc * self.p + f.coeff(i);
        }
        FieldElem(enc)
    }

    /// The constant coefficient, if `e` lies in the prime field.
    pub fn as_fp(&self, e: FieldElem) -> Option<u64> {
        (e.0 < self.p).then_some(e.0)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let c: Vec<u64> = self.coeffs(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&c)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    /// `1 - a`.
    pub fn one_minus(&self, a: FieldElem) -> FieldElem {
        let mut c: Vec<u64> = self.coeffs(a).iter().map(|&x| (self.p - x) % self.p).collect();
        c[0] = (c[0] + 1) % self.p;
        self.encode(&c)
    }

    fn encode(&self, coeffs: &[u64]) -> FieldElem {
        FieldElem(coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c))
    }

    fn mul_poly(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let prod = self.to_poly(a).mul_mod(&self.to_poly(b), &self.modulus);
        self.from_poly(&prod)
    }

    fn pow_poly(&self, a: FieldElem, e: u64) -> FieldElem {
        self.from_poly(&self.to_poly(a).pow_mod(e, &self.modulus))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElem(0);
                }
                let order = self.q - 1;
                let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % order;
                FieldElem(t.exp[k as usize] as u64)
            }
            None => self.mul_poly(a, b),
        }
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 {
                    return if e == 0 { self.one() } else { FieldElem(0) };
                }
                let order = self.q - 1;
                let k = mul_mod(t.log[a.0 as usize] as u64, e % order, order);
                FieldElem(t.exp[k as usize] as u64)
            }
            None => self.pow_poly(a, e),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (a.0 != 0).then(|| self.pow(a, self.q - 2))
    }

    /// `a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// Discrete logarithm with respect to [`ExtField::generator`].
    pub fn dlog(&self, a: FieldElem) -> Result<u64> {
        let t = self.tables.as_ref().ok_or(Error::DegreeTooLarge {
            p: self.p,
            m: self.m,
            limit: self.q.saturating_sub(1),
        })?;
        self.check(a)?;
        if a.0 == 0 {
            return Err(Error::MalformedInput("discrete logarithm of zero".into()));
        }
        Ok(t.log[a.0 as usize] as u64)
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> FieldElem {
        let order = self.q - 1;
        match &self.tables {
            Some(t) => FieldElem(t.exp[(k % order) as usize] as u64),
            None => self.pow_poly(self.generator, k % order),
        }
    }

    /// `N_{F_q/F_p}(y) = y^((q-1)/(p-1))`, with `N(0) = 0`.
    pub fn norm(&self, y: FieldElem) -> u64 {
        if y.0 == 0 {
            return 0;
        }
        let n = self.pow_poly(y, (self.q - 1) / (self.p - 1));
        self.as_fp(n).expect("norm lands in the prime field")
    }

    /// Size of the Frobenius orbit of `a`, i.e. the degree of `F_p(a)`.
    pub fn orbit_len(&self, a: FieldElem) -> u32 {
        let mut cur = self.frobenius(a);
        let mut len = 1;
        while cur != a {
            cur = self.frobenius(cur);
            len += 1;
        }
        len
    }

    pub fn frobenius_orbit(&self, a: FieldElem) -> Vec<FieldElem> {
        let mut out = vec![a];
        let mut cur = self.frobenius(a);
        while cur != a {
            out.push(cur);
            cur = self.frobenius(cur);
        }
        out
    }

    /// Minimal polynomial of `a` over `F_p`.
    pub fn minimal_poly(&self, a: FieldElem) -> FpPoly {
        // product of (X - b) over the orbit, with coefficients in this field
        let mut acc: Vec<FieldElem> = vec![self.one()];
        for b in self.frobenius_orbit(a) {
            let nb = self.neg(b);
            let mut next = vec![FieldElem(0); acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.add(next[i], self.mul(c, nb));
            }
            acc = next;
        }
        let coeffs = acc
            .into_iter()
            .map(|c| self.as_fp(c).expect("minimal polynomial has F_p coefficients"))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    /// Evaluates a polynomial over `F_p` at an element of this field.
    pub fn eval_fp_poly(&self, f: &FpPoly, x: FieldElem) -> FieldElem {
        f.coeffs().iter().rev().fold(self.zero(), |acc, &c| {
            self.add(self.mul(acc, x), self.from_fp(c))
        })
    }

    /// Image of the generator `X` of `sub` under a fixed embedding of `sub`
    /// into this field: the root of `sub`'s modulus with the smallest
    /// discrete logarithm (or zero, for the modulus `X` of a prime field).
    pub fn embedding_root(&self, sub: &ExtField) -> Result<FieldElem> {
        if sub.p != self.p || self.m % sub.m != 0 {
            return Err(Error::FieldMismatch(format!(
                "F_{}^{} does not embed in F_{}^{}",
                sub.p, sub.m, self.p, self.m
            )));
        }
        if sub.m == self.m && sub.m > 1 && sub.modulus == self.modulus {
            return self.from_coeffs(&[0, 1]);
        }
        let sub_order = sub.q - 1;
        let step = (self.q - 1) / sub_order;
        std::iter::once(self.zero())
            .chain((0..sub_order).map(|k| self.exp(k * step)))
            .find(|&y| self.eval_fp_poly(&sub.modulus, y) == self.zero())
            .ok_or_else(|| Error::Inconsistent("modulus of the subfield has no root in the extension".into()))
    }

    /// Maps `x` from `sub` into this field along the embedding sending `X`
    /// to `root` (see [`ExtField::embedding_root`]).
    pub fn embed_with(&self, sub: &ExtField, root: FieldElem, x: FieldElem) -> Result<FieldElem> {
        sub.check(x)?;
        if sub.m == self.m && sub.modulus == self.modulus {
            return Ok(x);
        }
        Ok(sub
            .coeffs(x)
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, root), self.from_fp(c))))
    }

    /// Maps `x` from the subfield `sub` into this field; a field homomorphism.
    pub fn embed(&self, sub: &ExtField, x: FieldElem) -> Result<FieldElem> {
        let root = self.embedding_root(sub)?;
        self.embed_with(sub, root, x)
    }
}

/// Smallest monic irreducible polynomial of degree `m` in encoding order.
fn smallest_irreducible(p: u64, m: u32) -> FpPoly {
    let count = p.pow(m);
    (0..count)
        .map(|enc| {
            let mut coeffs: Vec<u64> = (0..m).map(|i| enc / p.pow(i) % p).collect();
            coeffs.push(1);
            FpPoly::new(p, coeffs)
        })
        .find(|f| f.is_irreducible())
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn order_of(f: &ExtField, g: FieldElem) -> u64 {
        let mut k = 1;
        let mut cur = g;
        while cur != f.one() {
            cur = f.mul(cur, g);
            k += 1;
        }
        k
    }

    #[test]
    fn prime_field_generator() {
        let f = ExtField::create(7, 1).unwrap();
        // 2 has order 3, 3 is the first primitive root
        assert_eq!(order_of(&f, FieldElem(2)), 3);
        assert_eq!(f.generator(), FieldElem(3));
        assert_eq!(order_of(&f, f.generator()), 6);
    }

    #[test]
    fn f961_generator_order() {
        let f = ExtField::create(31, 2).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, 960), f.one());
        assert_ne!(f.pow(g, 480), f.one());
        assert_ne!(f.pow(g, 320), f.one());
        assert_ne!(f.pow(g, 192), f.one());
        assert!(f.modulus().is_irreducible());
    }

    #[test]
    fn not_prime() {
        assert_eq!(ExtField::create(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            ExtField::create(2, 60).unwrap_err(),
            Error::DegreeTooLarge { .. }
        ));
    }

    #[test]
    fn gaussian_integers_mod_7() {
        let f = ExtField::create(7, 2).unwrap();
        assert_eq!(f.modulus().coeffs(), &[1, 0, 1]);
        let i = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(i, i), f.from_fp(6));
        assert_eq!(f.pow(i, 8), f.one());
        assert_eq!(f.norm(i), 1);
    }

    #[test]
    fn dlog_tables_are_consistent() {
        for (p, m) in [(5, 1), (5, 2), (3, 3), (2, 4), (13, 2)] {
            let f = ExtField::create(p, m).unwrap();
            for k in 0..f.order() - 1 {
                assert_eq!(f.dlog(f.exp(k)).unwrap(), k);
            }
        }
    }

    #[test]
    fn untabled_field_matches_tabled() {
        let small = FieldConfig { table_limit: 0 };
        let a = ExtField::create(5, 3).unwrap();
        let b = ExtField::create_with(5, 3, &small).unwrap();
        assert!(!b.has_tables());
        assert_eq!(a.generator(), b.generator());
        for x in (1..125).step_by(7) {
            for y in (1..125).step_by(11) {
                assert_eq!(a.mul(FieldElem(x), FieldElem(y)), b.mul(FieldElem(x), FieldElem(y)));
            }
        }
        assert!(matches!(b.dlog(FieldElem(3)), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn norm_of_prime_field_elements_is_power() {
        for (p, m) in [(5u64, 2u32), (7, 2), (3, 3)] {
            let f = ExtField::create(p, m).unwrap();
            for y in 1..p {
                let expected = super::super::prime::pow_mod(y, m as u64, p);
                assert_eq!(f.norm(f.from_fp(y)), expected);
            }
        }
    }

    #[test]
    fn norm_is_frobenius_invariant() {
        let f = ExtField::create(5, 3).unwrap();
        for y in 0..f.order() {
            let y = FieldElem(y);
            assert_eq!(f.norm(y), f.norm(f.frobenius(y)));
        }
    }

    #[test]
    fn embedding_preserves_minimal_polynomial() {
        let sub = ExtField::create(3, 2).unwrap();
        let big = ExtField::create(3, 4).unwrap();
        for x in 2..9 {
            let x = FieldElem(x);
            let y = big.embed(&sub, x).unwrap();
            assert_eq!(big.minimal_poly(y), sub.minimal_poly(x));
            assert_eq!(big.norm(y), super::super::prime::pow_mod(sub.norm(x), 2, 3));
        }
        for (a, b) in [(2u64, 5u64), (3, 7), (4, 8)] {
            let (a, b) = (FieldElem(a), FieldElem(b));
            let image = |z| big.embed(&sub, z).unwrap();
            assert_eq!(image(sub.mul(a, b)), big.mul(image(a), image(b)));
            assert_eq!(image(sub.add(a, b)), big.add(image(a), image(b)));
        }
        let prime = ExtField::create(3, 1).unwrap();
        assert_eq!(big.embed(&prime, FieldElem(2)).unwrap(), big.from_fp(2));
        assert_eq!(sub.embed(&sub, FieldElem(5)).unwrap(), FieldElem(5));
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in 1u64..961, b in 1u64..961) {
            let f = ExtField::create(31, 2).unwrap();
            let (a, b) = (FieldElem(a), FieldElem(b));
            prop_assert_eq!(f.norm(f.mul(a, b)), f.norm(a) * f.norm(b) % 31);
        }
    }
}
