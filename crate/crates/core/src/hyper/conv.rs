//! Cyclic convolution over `Z/M`.
//!
//! Short inputs use the schoolbook product. Longer ones go through exact
//! integer convolution by number-theoretic transforms modulo several
//! 62-bit primes, recombined with the Chinese remainder theorem and then
//! reduced modulo `M`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::prime::{inv_mod, mul_mod, pow_mod};
use crate::scalar::ResidueInt;

/// `(prime, quadratic non-residue)`; every prime is `1 mod 2^32`.
const NTT_PRIMES: [(u64, u64); 8] = [
    (4611685941117976577, 3),
    (4611685692009873409, 19),
    (4611685606110527489, 3),
    (4611685318347718657, 5),
    (4611685232448372737, 3),
    (4611685219563470849, 3),
    (4611685125074190337, 5),
    (4611685090714451969, 3),
];

const SCHOOLBOOK_MAX_LEN: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvMethod {
    #[default]
    Auto,
    Schoolbook,
    Ntt,
}

pub fn cyclic_convolution<I: ResidueInt>(a: &[I], b: &[I], modulus: &I, method: ConvMethod) -> Vec<I> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    let use_ntt = match method {
        ConvMethod::Auto => a.len() > SCHOOLBOOK_MAX_LEN,
        ConvMethod::Schoolbook => false,
        ConvMethod::Ntt => true,
    };
    if use_ntt {
        if let Some(out) = ntt_convolution(a, b, modulus) {
            return out;
        }
    }
    schoolbook(a, b, modulus)
}

pub fn schoolbook<I: ResidueInt>(a: &[I], b: &[I], modulus: &I) -> Vec<I> {
    let len = a.len();
    let mut out = vec![I::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let k = if i + j >= len { i + j - len } else { i + j };
            out[k] = out[k].add_mod(&ai.mul_mod(bj, modulus), modulus);
        }
    }
    out
}

fn ntt(values: &mut [u64], prime: u64, root_base: u64, inverse: bool) {
    let n = values.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(root_base, (prime - 1) / len as u64, prime);
        if inverse {
            w_len = inv_mod(w_len, prime).expect("root of unity is invertible");
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = mul_mod(w, w_len, prime);
        }
        for chunk in values.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = mul_mod(hi[k], twiddles[k], prime);
                let s = u + v;
                lo[k] = if s >= prime { s - prime } else { s };
                hi[k] = if u >= v { u - v } else { u + prime - v };
            }
        }
        len <<= 1;
    }
    if inverse {
        let n_inv = inv_mod(n as u64 % prime, prime).expect("size is a unit");
        for v in values.iter_mut() {
            *v = mul_mod(*v, n_inv, prime);
        }
    }
}

/// Cyclic convolution of residues reduced modulo one NTT prime.
fn cyclic_mod_prime(a: &[u64], b: &[u64], prime: u64, root: u64) -> Vec<u64> {
    let len = a.len();
    let size = (2 * len - 1).next_power_of_two();
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    fa[..len].copy_from_slice(a);
    fb[..len].copy_from_slice(b);
    ntt(&mut fa, prime, root, false);
    ntt(&mut fb, prime, root, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul_mod(*x, *y, prime);
    }
    ntt(&mut fa, prime, root, true);
    let mut out = fa[..len].to_vec();
    for (i, &v) in fa[len..2 * len - 1].iter().enumerate() {
        let s = out[i] + v;
        out[i] = if s >= prime { s - prime } else { s };
    }
    out
}

fn ntt_convolution<I: ResidueInt>(a: &[I], b: &[I], modulus: &I) -> Option<Vec<I>> {
    let len = a.len();
    if len == 0 {
        return Some(Vec::new());
    }
    // every cyclic coefficient is a sum of `len` products below M^2
    let m = modulus.to_biguint();
    let bound = BigUint::from(len) * (&m - 1u32) * (&m - 1u32);
    let mut product = BigUint::one();
    let mut count = 0;
    while count == 0 || product <= bound {
        if count == NTT_PRIMES.len() {
            return None;
        }
        product *= NTT_PRIMES[count].0;
        count += 1;
    }
    let primes = &NTT_PRIMES[..count];
    let residues: Vec<Vec<u64>> = primes
        .iter()
        .map(|&(prime, root)| {
            let ra: Vec<u64> = a.iter().map(|x| x.rem_u64(prime)).collect();
            let rb: Vec<u64> = b.iter().map(|x| x.rem_u64(prime)).collect();
            cyclic_mod_prime(&ra, &rb, prime, root)
        })
        .collect();
    Some(crt_reduce(&residues, primes, modulus))
}

/// Garner recombination of per-prime residues, reduced modulo `modulus`.
fn crt_reduce<I: ResidueInt>(residues: &[Vec<u64>], primes: &[(u64, u64)], modulus: &I) -> Vec<I> {
    let len = residues[0].len();
    let k = primes.len();
    // inverses of prod_{i<j} p_i modulo p_j
    let mut inv_prefix = vec![1u64; k];
    for j in 1..k {
        let pj = primes[j].0;
        let prefix = primes[..j].iter().fold(1u64, |acc, &(pi, _)| mul_mod(acc, pi % pj, pj));
        inv_prefix[j] = inv_mod(prefix, pj).expect("distinct primes");
    }
    let m = modulus.to_biguint();
    let small_modulus = m.to_u128();
    (0..len)
        .map(|idx| {
            // mixed-radix digits
            let mut digits = vec![0u64; k];
            for j in 0..k {
                let pj = primes[j].0;
                // value of the partial reconstruction modulo p_j
                let mut acc = 0u64;
                let mut radix = 1u64;
                for i in 0..j {
                    acc = (acc + mul_mod(digits[i], radix, pj)) % pj;
                    radix = mul_mod(radix, primes[i].0 % pj, pj);
                }
                let diff = (residues[j][idx] % pj + pj - acc) % pj;
                digits[j] = mul_mod(diff, inv_prefix[j], pj);
            }
            if k <= 2 {
                if let Some(mm) = small_modulus {
                    let mut v = digits[0] as u128;
                    if k == 2 {
                        v += digits[1] as u128 * primes[0].0 as u128;
                    }
                    let r = v % mm;
                    return I::from_biguint(&BigUint::from(r)).expect("reduced");
                }
            }
            let mut value = BigUint::zero();
            let mut radix = BigUint::one();
            for i in 0..k {
                value += &radix * digits[i];
                radix *= primes[i].0;
            }
            I::from_biguint(&(value % &m)).expect("reduced")
        })
        .collect()
}
