//! Hypergeometric local systems `E_c` over `G_m \ {1}`: the mod-p layer,
//! exact Frobenius traces, characteristic polynomial valuations and the
//! per-point slope pipeline.

pub mod charpoly;
pub mod conv;
pub mod datum;
pub mod point;
pub mod slopes;
pub mod trace;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::arith::{prime_power, ExtField, FieldConfig, FieldElem, PadicResidue};
use crate::error::{Error, Result};
use crate::scalar::fits_modulus;

pub use charpoly::{CharPolyData, Strategy, StrategyChoice};
pub use conv::ConvMethod;
pub use datum::{dual_datum, u_factorization_check, u_poly, HypergeometricDatum, UPoly};
pub use point::PointSpec;
pub use slopes::{gap_profile, GapProfile, PrecisionChoice, SlopeReport};
pub use trace::TraceMethod;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub field: FieldConfig,
    pub trace: TraceMethod,
    pub conv: ConvMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct SumKey {
    p: u64,
    degree: u32,
    c: Vec<u64>,
    precision: u32,
}

enum SumTable {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl SumTable {
    fn get(&self, d: usize) -> BigUint {
        match self {
            SumTable::Small(v) => BigUint::from(v[d]),
            SumTable::Big(v) => v[d].clone(),
        }
    }
}

type Slot<T> = Arc<OnceLock<Result<Arc<T>>>>;

/// Shared state for trace computations: finite fields and full character
/// sum tables, each built once and reused across points.
///
/// Safe to share between threads; every cached value is immutable.
#[derive(Default)]
pub struct HyperEngine {
    config: EngineConfig,
    fields: Mutex<HashMap<(u64, u32), Slot<ExtField>>>,
    exponents: Mutex<HashMap<(u64, u32), Slot<Vec<Option<u32>>>>>,
    sums: Mutex<HashMap<SumKey, Slot<SumTable>>>,
    /// Image of the generator of `F_{p^m}` in `F_{p^(m j)}`, keyed by `(p, m, m j)`.
    embeddings: Mutex<HashMap<(u64, u32, u32), Slot<FieldElem>>>,
}

fn cached<K, T>(map: &Mutex<HashMap<K, Slot<T>>>, key: K, build: impl FnOnce() -> Result<T>) -> Result<Arc<T>>
where
    K: std::hash::Hash + Eq,
{
    let slot = map
        .lock()
        .expect("cache lock poisoned")
        .entry(key)
        .or_default()
        .clone();
    slot.get_or_init(|| build().map(Arc::new)).clone()
}

impl HyperEngine {
    pub fn new(config: EngineConfig) -> Self {
        HyperEngine {
            config,
            ..Default::default()
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn field(&self, p: u64, m: u32) -> Result<Arc<ExtField>> {
        let config = self.config.field;
        cached(&self.fields, (p, m), || ExtField::create_with(p, m, &config))
    }

    fn check_point(datum: &HypergeometricDatum, point: &PointSpec) -> Result<()> {
        if point.field().p() != datum.p() {
            return Err(Error::FieldMismatch(format!(
                "point over F_{} used with a datum over F_{}",
                point.field().p(),
                datum.p()
            )));
        }
        Ok(())
    }

    /// The point's representative inside `F_{p^(m j)}`.
    pub fn lift_point(&self, point: &PointSpec, j: u32) -> Result<(Arc<ExtField>, FieldElem)> {
        if j == 0 {
            return Err(Error::MalformedInput("Frobenius power must be at least 1".into()));
        }
        let sub = point.field();
        let big = self.field(sub.p(), sub.degree() * j)?;
        let root = cached(&self.embeddings, (sub.p(), sub.degree(), big.degree()), || {
            big.embedding_root(sub)
        })?;
        let x = big.embed_with(sub, *root, point.x())?;
        Ok((big, x))
    }

    /// `N_{F_{p^m}/F_p}(u_c(x))`.
    pub fn u_norm_eval(&self, datum: &HypergeometricDatum, point: &PointSpec) -> Result<u64> {
        Self::check_point(datum, point)?;
        let field = point.field();
        let value = field.eval_fp_poly(u_poly(datum).poly(), point.x());
        Ok(field.norm(value))
    }

    fn sum_table(&self, datum: &HypergeometricDatum, field: &Arc<ExtField>, precision: u32) -> Result<Arc<SumTable>> {
        let key = SumKey {
            p: field.p(),
            degree: field.degree(),
            c: datum.c().to_vec(),
            precision,
        };
        let method = self.config.conv;
        cached(&self.sums, key, || {
            let exps = cached(&self.exponents, (field.p(), field.degree()), || trace::norm_exponents(field))?;
            let modulus = prime_power(field.p(), precision);
            if fits_modulus::<u64>(&modulus) {
                trace::convolution_sums::<u64>(field, &exps, datum.c(), precision, method).map(SumTable::Small)
            } else {
                trace::convolution_sums::<BigUint>(field, &exps, datum.c(), precision, method).map(SumTable::Big)
            }
        })
    }

    /// The unsigned character sum `S(x)` over `F_{p^(m j)}`, modulo `p^N`.
    pub fn character_sum(
        &self,
        datum: &HypergeometricDatum,
        point: &PointSpec,
        j: u32,
        precision: u32,
    ) -> Result<PadicResidue> {
        Self::check_point(datum, point)?;
        let (field, x) = self.lift_point(point, j)?;
        match self.config.trace {
            TraceMethod::Convolution => {
                let table = self.sum_table(datum, &field, precision)?;
                let d = field.dlog(x)? as usize;
                PadicResidue::new(field.p(), precision, &table.get(d))
            }
            TraceMethod::Enumeration => {
                let modulus = prime_power(field.p(), precision);
                if fits_modulus::<u64>(&modulus) {
                    trace::enumerated_sum::<u64>(&field, datum.c(), x, precision)?.convert()
                } else {
                    trace::enumerated_sum::<BigUint>(&field, datum.c(), x, precision)
                }
            }
        }
    }

    /// Trace of the `j`-th power of Frobenius on the stalk at `point`, modulo `p^N`.
    pub fn frobenius_trace(
        &self,
        datum: &HypergeometricDatum,
        point: &PointSpec,
        j: u32,
        precision: u32,
    ) -> Result<PadicResidue> {
        let s = self.character_sum(datum, point, j, precision)?;
        Ok(if datum.rank() % 2 == 0 { s.neg() } else { s })
    }
}
