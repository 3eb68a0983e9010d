use std::fmt;
use std::sync::Arc;

use crate::arith::{ExtField, FieldElem};
use crate::error::{Error, Result};

/// A closed point of `G_m \ {1}` over `F_p`, given by a canonical
/// representative `x` of exact degree `m` in `F_{p^m}`.
#[derive(Clone, Debug)]
pub struct PointSpec {
    field: Arc<ExtField>,
    x: FieldElem,
    rep_dlog: Option<u64>,
}

impl PartialEq for PointSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p()
            && self.field.degree() == other.field.degree()
            && self.x == other.x
    }
}

impl Eq for PointSpec {}

impl PointSpec {
    /// Validates `x` and replaces it by the Frobenius conjugate with the
    /// smallest discrete logarithm (smallest encoding if the field has no tables).
    pub fn new(field: Arc<ExtField>, x: FieldElem) -> Result<Self> {
        field.check(x)?;
        if x == field.zero() || x == field.one() {
            return Err(Error::InvalidPoint(format!("x = {} is 0 or 1", x)));
        }
        let orbit = field.frobenius_orbit(x);
        if orbit.len() as u32 != field.degree() {
            return Err(Error::InvalidPoint(format!(
                "x has degree {} over F_{}, not {}",
                orbit.len(),
                field.p(),
                field.degree()
            )));
        }
        let (x, rep_dlog) = if field.has_tables() {
            let (d, y) = orbit
                .iter()
                .map(|&y| (field.dlog(y).expect("nonzero"), y))
                .min()
                .expect("nonempty orbit");
            (y, Some(d))
        } else {
            (*orbit.iter().min().expect("nonempty orbit"), None)
        };
        Ok(PointSpec { field, x, rep_dlog })
    }

    /// All closed points of exact degree `m = field.degree()`, ordered by
    /// the discrete logarithm of their representatives.
    pub fn enumerate(field: &Arc<ExtField>) -> Result<Vec<PointSpec>> {
        let order = field.order() - 1;
        let m = field.degree();
        let p = field.p();
        // dlog one to force the table requirement early
        field.dlog(field.one())?;
        let mut out = Vec::new();
        for k in 1..order {
            let mut orbit_min = k;
            let mut cur = k;
            let mut len = 1;
            loop {
                cur = ((cur as u128 * p as u128) % order as u128) as u64;
                if cur == k {
                    break;
                }
                orbit_min = orbit_min.min(cur);
                len += 1;
            }
            if len != m || orbit_min != k {
                continue;
            }
            out.push(PointSpec {
                field: field.clone(),
                x: field.exp(k),
                rep_dlog: Some(k),
            });
        }
        Ok(out)
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn x(&self) -> FieldElem {
        self.x
    }

    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    pub fn rep_dlog(&self) -> Option<u64> {
        self.rep_dlog
    }

    /// Text form accepted by [`PointSpec::parse`]: the integer for degree
    /// one, otherwise coefficients from low to high degree joined by `:`.
    pub fn label(&self) -> String {
        if self.degree() == 1 {
            self.x.0.to_string()
        } else {
            let c: Vec<String> = self.field.coeffs(self.x).iter().map(u64::to_string).collect();
            c.join(":")
        }
    }

    pub fn parse(field: Arc<ExtField>, text: &str) -> Result<Self> {
        let p = field.p();
        let coeffs: Vec<u64> = text
            .split(':')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map(|v| v.rem_euclid(p as i64) as u64)
                    .map_err(|_| Error::MalformedInput(format!("bad point coordinate {t:?}")))
            })
            .collect::<Result<_>>()?;
        let x = field.from_coeffs(&coeffs)?;
        PointSpec::new(field, x)
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
