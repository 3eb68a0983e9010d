//! Character sums over `F_q` and Frobenius traces of `E_c`.
//!
//! The trace of Frobenius at `x` in `F_q` is `(-1)^(n-1)` times
//!
//! ```text
//! S(x) = sum over x_1 ... x_n = x of prod_i τ(N(1 - x_i))^(c_i)
//! ```
//!
//! where factors with `x_i = 1` vanish. Two independent evaluations are
//! provided: iterated cyclic convolution over `F_q^×` indexed by discrete
//! logarithm (all `x` at once), and direct enumeration of tuples (one `x`).

use crate::arith::padic::teichmuller_powers;
use crate::arith::{teichmuller, ExtField, FieldElem, PadicResidue};
use crate::error::Result;
use crate::scalar::ResidueInt;

use super::conv::{cyclic_convolution, ConvMethod};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceMethod {
    #[default]
    Convolution,
    Enumeration,
}

/// For each `k` in `0..q-1`, the discrete log modulo `p - 1` of `N(1 - g^k)`,
/// or `None` at `k = 0` where `1 - g^k = 0`.
pub fn norm_exponents(field: &ExtField) -> Result<Vec<Option<u32>>> {
    let order = field.order() - 1;
    let p = field.p();
    (0..order)
        .map(|k| {
            if k == 0 {
                return Ok(None);
            }
            let y = field.one_minus(field.exp(k));
            Ok(Some((field.dlog(y)? % (p - 1)) as u32))
        })
        .collect()
}

/// `S(g^d)` for every `d`, by `n - 1` cyclic convolutions.
pub fn convolution_sums<I: ResidueInt>(
    field: &ExtField,
    exponents: &[Option<u32>],
    c: &[u64],
    precision: u32,
    method: ConvMethod,
) -> Result<Vec<I>> {
    let p = field.p();
    let modulus = PadicResidue::<I>::modulus_for(p, precision)?;
    let h = field.norm(field.generator());
    let omega = teichmuller_powers::<I>(p, h, precision)?;
    let mut acc: Option<Vec<I>> = None;
    for &ci in c {
        let f: Vec<I> = exponents
            .iter()
            .map(|e| match e {
                None => I::zero(),
                Some(d) => omega[((ci * *d as u64) % (p - 1)) as usize].clone(),
            })
            .collect();
        acc = Some(match acc {
            None => f,
            Some(a) => cyclic_convolution(&a, &f, &modulus, method),
        });
    }
    Ok(acc.expect("rank is at least one"))
}

/// `S(x)` by enumerating every tuple `(x_1, ..., x_n)` with product `x`.
///
/// Character values come from the norm and Teichmüller lift of each
/// element, not from discrete-log bookkeeping.
pub fn enumerated_sum<I: ResidueInt>(
    field: &ExtField,
    c: &[u64],
    x: FieldElem,
    precision: u32,
) -> Result<PadicResidue<I>> {
    let p = field.p();
    let order = field.order() - 1;
    let modulus = PadicResidue::<I>::modulus_for(p, precision)?;
    let target = field.dlog(x)?;
    // τ(N(1 - g^k)) for each k
    let lifts: Vec<I> = (0..order)
        .map(|k| {
            let n = field.norm(field.one_minus(field.exp(k)));
            Ok(teichmuller::<I>(p, n, precision)?.value().clone())
        })
        .collect::<Result<_>>()?;
    let values: Vec<Vec<I>> = c
        .iter()
        .map(|&ci| lifts.iter().map(|t| t.pow_mod(ci, &modulus)).collect())
        .collect();
    let n = c.len();
    let mut total = I::zero();
    let mut idx = vec![1u64; n.saturating_sub(1)];
    if n == 1 {
        total = values[0][target as usize].clone();
    } else {
        'outer: loop {
            let used: u64 = idx.iter().sum::<u64>() % order;
            let last = (target + order - used) % order;
            if last != 0 {
                let mut prod = values[n - 1][last as usize].clone();
                for (i, &k) in idx.iter().enumerate() {
                    prod = prod.mul_mod(&values[i][k as usize], &modulus);
                }
                total = total.add_mod(&prod, &modulus);
            }
            // advance the odometer over 1..order
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < order {
                    continue 'outer;
                }
                *slot = 1;
            }
            break;
        }
    }
    Ok(PadicResidue::from_parts(p, precision, modulus, total))
}
