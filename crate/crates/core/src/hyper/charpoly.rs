//! Valuations of the coefficients of `det(1 - F_x t)` on a stalk.
//!
//! Power traces give the leading coefficients through Newton's identities;
//! the rest come from the determinant and from duality, depending on the
//! [`Strategy`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{PadicResidue, Valuation};
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::Rational;

use super::{dual_datum, HyperEngine, HypergeometricDatum, PointSpec};

/// Which power traces are computed and how the remaining coefficients are filled in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Traces for `j <= n`; every coefficient computed directly.
    #[serde(rename = "full")]
    Full,
    /// Traces for `j <= n - 1`; `b_n` from the determinant.
    #[serde(rename = "det")]
    DetCompletion,
    /// Traces for `j <= ceil(n/2)`; upper half from `c' = c`.
    #[serde(rename = "selfdual")]
    SelfDual,
    /// Traces for `j <= ceil(n/2)` for both `c` and `c'`.
    #[serde(rename = "dualpair")]
    DualPair,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Full,
        Strategy::DetCompletion,
        Strategy::SelfDual,
        Strategy::DualPair,
    ];

    /// Largest Frobenius power whose trace the strategy needs.
    pub fn max_power(self, n: usize) -> usize {
        match self {
            Strategy::Full => n,
            Strategy::DetCompletion => n - 1,
            Strategy::SelfDual | Strategy::DualPair => n.div_ceil(2),
        }
    }

    /// Working precision that resolves every coefficient the strategy computes directly.
    pub fn default_precision(self, n: usize, m: u32) -> u32 {
        let n = n as u32;
        match self {
            Strategy::Full | Strategy::DetCompletion => m * n * (n - 1) + 2,
            Strategy::SelfDual | Strategy::DualPair => m * n.div_ceil(2) * (n - 1) + 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Full => "full",
            Strategy::DetCompletion => "det",
            Strategy::SelfDual => "selfdual",
            Strategy::DualPair => "dualpair",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alias = match s {
            "det-completion" => "det",
            "self-dual" => "selfdual",
            "dual-pair" => "dualpair",
            other => other,
        };
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == alias)
            .ok_or_else(|| Error::MalformedInput(format!("unknown strategy '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StrategyChoice {
    /// `SelfDual` when `c' = c`, otherwise `DualPair`.
    #[default]
    Auto,
    Fixed(Strategy),
}

impl StrategyChoice {
    pub fn resolve(self, datum: &HypergeometricDatum) -> Strategy {
        match self {
            StrategyChoice::Fixed(s) => s,
            StrategyChoice::Auto if datum.is_self_dual() => Strategy::SelfDual,
            StrategyChoice::Auto => Strategy::DualPair,
        }
    }
}

impl fmt::Display for StrategyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyChoice::Auto => f.write_str("auto"),
            StrategyChoice::Fixed(s) => s.fmt(f),
        }
    }
}

impl FromStr for StrategyChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(StrategyChoice::Auto)
        } else {
            s.parse().map(StrategyChoice::Fixed)
        }
    }
}

/// Coefficient valuations of `P_x(t) = sum b_r t^r` at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyData {
    pub n: usize,
    pub m: u32,
    /// `v_p(b_r)` for `r = 0..=n`.
    pub valuations: Vec<Valuation<Rational>>,
    /// `b_r` modulo `p^N` for the directly computed indices.
    pub residues: Vec<Option<PadicResidue>>,
    pub strategy: Strategy,
    pub precision: u32,
}

/// `e_0, ..., e_k` from power sums `p_1, ..., p_k` via
/// `r e_r = sum_{i=1..r} (-1)^(i-1) e_(r-i) p_i`.
///
/// Fails with `NotAUnit` if some `r <= k` is divisible by `p`.
pub fn elementary_from_power_sums(power_sums: &[PadicResidue]) -> Result<Vec<PadicResidue>> {
    let first = power_sums
        .first()
        .ok_or_else(|| Error::MalformedInput("no power sums given".into()))?;
    let mut e = vec![PadicResidue::one(first.p(), first.precision())?];
    for r in 1..=power_sums.len() {
        let mut acc = PadicResidue::zero(first.p(), first.precision())?;
        for i in 1..=r {
            let term = e[r - i].try_mul(&power_sums[i - 1])?;
            acc = if i % 2 == 1 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
        }
        e.push(acc.div_small(r as u64)?);
    }
    Ok(e)
}

fn int(v: i64) -> Rational {
    Rational::from_int(v)
}

fn merge(
    slot: &mut Option<Valuation<Rational>>,
    incoming: Valuation<Rational>,
    index: usize,
) -> Result<()> {
    let merged = match (slot.take(), incoming) {
        (None, v) => v,
        (Some(Valuation::Exact(a)), Valuation::Exact(b)) => {
            if a != b {
                return Err(Error::Inconsistent(format!(
                    "v(b_{index}) computed as {a} and completed as {b}"
                )));
            }
            Valuation::Exact(a)
        }
        (Some(Valuation::Exact(a)), Valuation::AtLeast(b)) | (Some(Valuation::AtLeast(b)), Valuation::Exact(a)) => {
            if a < b {
                return Err(Error::Inconsistent(format!(
                    "v(b_{index}) = {a} contradicts the lower bound {b}"
                )));
            }
            Valuation::Exact(a)
        }
        (Some(Valuation::AtLeast(a)), Valuation::AtLeast(b)) => Valuation::AtLeast(a.max(b)),
    };
    *slot = Some(merged);
    Ok(())
}

impl HyperEngine {
    /// `b_0, ..., b_k` for `datum` at `point`, from the traces of `F^1, ..., F^k`.
    pub fn leading_coefficients(
        &self,
        datum: &HypergeometricDatum,
        point: &PointSpec,
        k: usize,
        precision: u32,
    ) -> Result<Vec<PadicResidue>> {
        if k == 0 {
            return Ok(vec![PadicResidue::one(datum.p(), precision)?]);
        }
        let traces = (1..=k)
            .map(|j| self.frobenius_trace(datum, point, j as u32, precision))
            .collect::<Result<Vec<_>>>()?;
        let e = elementary_from_power_sums(&traces)?;
        Ok(e.into_iter()
            .enumerate()
            .map(|(r, er)| if r % 2 == 1 { er.neg() } else { er })
            .collect())
    }

    /// Valuations of every coefficient of the local characteristic polynomial.
    pub fn char_poly_valuations(
        &self,
        datum: &HypergeometricDatum,
        point: &PointSpec,
        strategy: Strategy,
        precision: u32,
    ) -> Result<CharPolyData> {
        let n = datum.rank();
        let p = datum.p();
        if p <= n as u64 {
            return Err(Error::RankTooLargeForP { p, n });
        }
        if strategy == Strategy::SelfDual && !datum.is_self_dual() {
            return Err(Error::StrategyUnavailable(format!(
                "{datum} is not self-dual"
            )));
        }
        if precision == 0 {
            return Err(Error::MalformedInput("precision must be at least 1".into()));
        }
        let m = point.degree();
        let half = (n * (n - 1) / 2) as i64;
        let det = int(m as i64 * half);
        // v(b_(n-r)) = v(b'_r) + m (n(n-1)/2 - r(n-1))
        let completion_shift = |r: usize| int(m as i64 * (half - (r * (n - 1)) as i64));

        let k = strategy.max_power(n);
        let direct = self.leading_coefficients(datum, point, k, precision)?;
        let mut slots: Vec<Option<Valuation<Rational>>> = vec![None; n + 1];
        for (r, b) in direct.iter().enumerate() {
            slots[r] = Some(b.valuation());
        }
        match strategy {
            Strategy::Full | Strategy::DetCompletion => {}
            Strategy::SelfDual => {
                for r in 0..=k {
                    let v = direct[r].valuation::<Rational>().shift(&completion_shift(r));
                    merge(&mut slots[n - r], v, n - r)?;
                }
            }
            Strategy::DualPair => {
                let dual = dual_datum(datum);
                let dual_direct = self.leading_coefficients(&dual, point, k, precision)?;
                for (r, b) in dual_direct.iter().enumerate() {
                    let v = b.valuation::<Rational>().shift(&completion_shift(r));
                    merge(&mut slots[n - r], v, n - r)?;
                }
            }
        }
        merge(&mut slots[n], Valuation::Exact(det), n)?;

        let valuations: Vec<Valuation<Rational>> = slots
            .into_iter()
            .enumerate()
            .map(|(r, v)| v.ok_or_else(|| Error::Inconsistent(format!("v(b_{r}) left undetermined"))))
            .collect::<Result<_>>()?;
        if valuations[0] != Valuation::Exact(int(0)) {
            return Err(Error::Inconsistent("b_0 is not a unit".into()));
        }
        let mut residues: Vec<Option<PadicResidue>> = direct.into_iter().map(Some).collect();
        residues.resize(n + 1, None);
        Ok(CharPolyData {
            n,
            m,
            valuations,
            residues,
            strategy,
            precision,
        })
    }
}
