//! Serializable records: one per computed point, shared by the scan report,
//! the checkpoint file and the command-line output.
//!
//! Rationals are written as `"num/den"` strings (integers without a
//! denominator) and never as floats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyper::{HypergeometricDatum, PrecisionChoice, SlopeReport, StrategyChoice};
use crate::Rational;

pub const SCHEMA_VERSION: &str = "1";

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    t.parse::<Rational>()
        .ok()
        .filter(|_| !t.ends_with("/0"))
        .ok_or_else(|| Error::MalformedInput(format!("bad rational {text:?}")))
}

pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Slopes and flags at one closed point, with the request that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeRecord {
    pub schema_version: String,
    pub p: u64,
    pub c: Vec<u64>,
    /// Degree of the closed point.
    pub m: u32,
    /// Point label: an integer for degree one, else `:`-joined coefficients.
    pub x: String,
    /// Requested strategy (`auto`, `full`, `det`, `selfdual`, `dualpair`).
    pub strategy: String,
    /// Requested precision (`auto` or an integer).
    pub precision: String,
    /// Strategy that ran, or `None` when the slopes were generic without p-adic work.
    pub strategy_used: Option<String>,
    pub precision_used: Option<u32>,
    pub slopes: Vec<String>,
    pub gaps: Vec<String>,
    pub max_gap: String,
    pub u_c_zero: bool,
    pub u_cdual_zero: bool,
    pub violates_small_gaps: bool,
    /// Discrete log of the point representative, when the field has tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep_dlog: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl SlopeRecord {
    pub fn from_report(
        datum: &HypergeometricDatum,
        report: &SlopeReport,
        strategy: StrategyChoice,
        precision: PrecisionChoice,
    ) -> Self {
        let strings = |v: &[Rational]| v.iter().map(rational_to_string).collect::<Vec<_>>();
        SlopeRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            p: datum.p(),
            c: datum.c().to_vec(),
            m: report.point.degree(),
            x: report.point.label(),
            strategy: strategy.to_string(),
            precision: precision.to_string(),
            strategy_used: report.strategy.map(|s| s.to_string()),
            precision_used: report.precision,
            slopes: strings(report.slopes.values()),
            gaps: strings(&report.gaps),
            max_gap: rational_to_string(&report.max_gap),
            u_c_zero: report.u_c_zero,
            u_cdual_zero: report.u_cdual_zero,
            violates_small_gaps: report.violates_small_gaps,
            rep_dlog: report.point.rep_dlog(),
            timing_ms: None,
        }
    }

    pub fn slopes(&self) -> Result<Vec<Rational>> {
        self.slopes.iter().map(|s| parse_rational(s)).collect()
    }

    pub fn max_gap(&self) -> Result<Rational> {
        parse_rational(&self.max_gap)
    }

    /// Column names for delimited output, in field order.
    pub const COLUMNS: [&'static str; 16] = [
        "schema_version",
        "p",
        "c",
        "m",
        "x",
        "strategy",
        "precision",
        "strategy_used",
        "precision_used",
        "slopes",
        "gaps",
        "max_gap",
        "u_c_zero",
        "u_cdual_zero",
        "violates_small_gaps",
        "timing_ms",
    ];

    /// One row for delimited output; list fields are `;`-joined.
    pub fn to_row(&self) -> Vec<String> {
        let join = |v: &[String]| v.join(";");
        vec![
            self.schema_version.clone(),
            self.p.to_string(),
            self.c.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
            self.m.to_string(),
            self.x.clone(),
            self.strategy.clone(),
            self.precision.clone(),
            self.strategy_used.clone().unwrap_or_default(),
            self.precision_used.map(|n| n.to_string()).unwrap_or_default(),
            join(&self.slopes),
            join(&self.gaps),
            self.max_gap.clone(),
            self.u_c_zero.to_string(),
            self.u_cdual_zero.to_string(),
            self.violates_small_gaps.to_string(),
            self.timing_ms.map(|t| t.to_string()).unwrap_or_default(),
        ]
    }
}

/// Error payload written to standard output by failing commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub schema_version: String,
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suggested_precision: Option<u32>,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            error: e.kind().to_string(),
            message: e.to_string(),
            suggested_precision: match e {
                Error::PrecisionInsufficient { suggested, .. } => Some(*suggested),
                _ => None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use proptest::prelude::*;

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&Rational::from_frac(5, 2)), "5/2");
        assert_eq!(rational_to_string(&Rational::from_frac(4, 2)), "2");
        assert_eq!(rational_to_string(&Rational::from_frac(-1, 3)), "-1/3");
        assert_eq!(parse_rational(" 10/4 ").unwrap(), Rational::from_frac(5, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(parse_rational_list("0,1/3,-2").unwrap().len(), 3);
    }

    proptest! {
        #[test]
        fn rational_string_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
            let q = Rational::from_frac(n, d);
            prop_assert_eq!(parse_rational(&rational_to_string(&q)).unwrap(), q);
        }
    }
}
