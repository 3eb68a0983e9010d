//! Slopes of `E_c` at a closed point and their gap profile.

use crate::arith::Valuation;
use crate::error::{Error, Result};
use crate::polygon::{lower_hull, slopes_descending, HullPoint, SlopeVector};
use crate::scalar::ExactScalar;
use crate::Rational;

use super::charpoly::{Strategy, StrategyChoice};
use super::{dual_datum, HyperEngine, HypergeometricDatum, PointSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PrecisionChoice {
    #[default]
    Auto,
    Fixed(u32),
}

impl std::fmt::Display for PrecisionChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrecisionChoice::Auto => f.write_str("auto"),
            PrecisionChoice::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for PrecisionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(PrecisionChoice::Auto);
        }
        match s.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(PrecisionChoice::Fixed(n)),
            _ => Err(Error::MalformedInput(format!("precision must be 'auto' or a positive integer, got '{s}'"))),
        }
    }
}

impl PrecisionChoice {
    pub fn resolve(self, strategy: Strategy, n: usize, m: u32) -> u32 {
        match self {
            PrecisionChoice::Auto => strategy.default_precision(n, m),
            PrecisionChoice::Fixed(v) => v,
        }
    }
}

/// Consecutive slope differences `a_i - a_(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile<T> {
    pub gaps: Vec<T>,
    pub max_gap: T,
    pub violates_small_gaps: bool,
}

pub fn gap_profile<T: ExactScalar>(slopes: &SlopeVector<T>) -> GapProfile<T> {
    let gaps: Vec<T> = slopes
        .values()
        .windows(2)
        .map(|w| w[0].clone() - w[1].clone())
        .collect();
    let max_gap = gaps.iter().cloned().max().unwrap_or_else(T::zero);
    GapProfile {
        violates_small_gaps: max_gap > T::one(),
        gaps,
        max_gap,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeReport {
    pub point: PointSpec,
    pub slopes: SlopeVector<Rational>,
    pub gaps: Vec<Rational>,
    pub max_gap: Rational,
    pub violates_small_gaps: bool,
    pub u_c_zero: bool,
    pub u_cdual_zero: bool,
    /// `None` when the slopes were read off without p-adic work.
    pub strategy: Option<Strategy>,
    pub precision: Option<u32>,
}

impl SlopeReport {
    pub fn fast_path(&self) -> bool {
        self.strategy.is_none()
    }

    /// Problems with the report measured against the general constraints on
    /// slopes of `E_c`; empty when all hold.
    pub fn invariant_violations(&self, n: usize) -> Vec<String> {
        let mut out = Vec::new();
        let a = self.slopes.values();
        let top = Rational::from_int(n as i64 - 1);
        if a.len() != n {
            out.push(format!("{} slopes for rank {n}", a.len()));
            return out;
        }
        if self.slopes.sum() != Rational::from_int((n * (n - 1) / 2) as i64) {
            out.push(format!("slope sum {} is not n(n-1)/2", self.slopes.sum()));
        }
        if a.iter().any(|s| *s < Rational::from_int(0) || *s > top) {
            out.push("slope outside [0, n-1]".into());
        }
        if n > 1 {
            if a[n - 2] <= Rational::from_int(0) {
                out.push("a_(n-1) is not positive".into());
            }
            if a[1] >= top {
                out.push("a_2 is not below n-1".into());
            }
        }
        if (a[n - 1] > Rational::from_int(0)) != self.u_c_zero {
            out.push("a_n > 0 disagrees with u_c(x) = 0".into());
        }
        if (a[0] < top) != self.u_cdual_zero {
            out.push("a_1 < n-1 disagrees with u_c'(x) = 0".into());
        }
        for r in 1..=n {
            let bound = Rational::from_int((r * (2 * n - r - 1) / 2) as i64);
            if self.slopes.partial_sum(r) > bound {
                out.push(format!("partial sum {r} exceeds the generic one"));
            }
        }
        let profile = gap_profile(&self.slopes);
        if profile.gaps != self.gaps || profile.max_gap != self.max_gap || profile.violates_small_gaps != self.violates_small_gaps {
            out.push("gap profile does not match the slopes".into());
        }
        out
    }
}

fn hull_points(valuations: &[Valuation<Rational>]) -> Vec<HullPoint<Rational>> {
    valuations
        .iter()
        .enumerate()
        .map(|(index, val)| HullPoint { index, val: val.clone() })
        .collect()
}

impl HyperEngine {
    /// Slopes at a closed point, with `u_c(x) = 0` and `u_c'(x) = 0` flags.
    ///
    /// For `n <= 3` with both `u_c(x)` and `u_c'(x)` nonzero the slopes are
    /// `(n-1, ..., 0)` and no traces are computed.
    pub fn slopes_at_point(
        &self,
        datum: &HypergeometricDatum,
        point: &PointSpec,
        strategy: StrategyChoice,
        precision: PrecisionChoice,
    ) -> Result<SlopeReport> {
        let n = datum.rank();
        if datum.p() <= n as u64 {
            return Err(Error::RankTooLargeForP { p: datum.p(), n });
        }
        let strategy = strategy.resolve(datum);
        if strategy == Strategy::SelfDual && !datum.is_self_dual() {
            return Err(Error::StrategyUnavailable(format!("{datum} is not self-dual")));
        }
        let u_c_zero = self.u_norm_eval(datum, point)? == 0;
        let u_cdual_zero = self.u_norm_eval(&dual_datum(datum), point)? == 0;
        let m = point.degree();

        let (slopes, used) = if n <= 3 && !u_c_zero && !u_cdual_zero {
            (SlopeVector::generic(n), None)
        } else {
            let big_n = precision.resolve(strategy, n, m);
            let cp = self.char_poly_valuations(datum, point, strategy, big_n)?;
            let polygon = lower_hull(&hull_points(&cp.valuations)).map_err(|e| match e {
                Error::PrecisionInsufficient { index, bound, hull, .. } => Error::PrecisionInsufficient {
                    index,
                    bound,
                    hull,
                    precision: big_n,
                    suggested: big_n.max(strategy.default_precision(n, m)) + m * (n as u32 - 1),
                },
                other => other,
            })?;
            (slopes_descending(&polygon, m), Some((strategy, big_n)))
        };
        let profile = gap_profile(&slopes);
        Ok(SlopeReport {
            point: point.clone(),
            slopes,
            gaps: profile.gaps,
            max_gap: profile.max_gap,
            violates_small_gaps: profile.violates_small_gaps,
            u_c_zero,
            u_cdual_zero,
            strategy: used.map(|u| u.0),
            precision: used.map(|u| u.1),
        })
    }
}
