//! Family sweeps for points whose consecutive slopes differ by more than 1.
//!
//! Work items are `(datum, closed point)` pairs. They run on a rayon pool of
//! configurable size and are reassembled in a fixed order, so the report
//! does not depend on the number of workers. Each finished point can be
//! appended to a newline-delimited JSON checkpoint, and a rerun with the
//! same checkpoint skips every point already recorded there.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::prime::{inv_mod, is_prime, primes_in};
use crate::error::{Error, Result};
use crate::hyper::{HyperEngine, HypergeometricDatum, PointSpec, PrecisionChoice, SlopeReport, StrategyChoice};
use crate::record::{SlopeRecord, SCHEMA_VERSION};

/// Degree-one points of the quintic family at `p = 31` whose slopes are known
/// to be `(5/2, 5/2, 1/2, 1/2)`.
pub const KNOWN_QUINTIC_GAP_POINTS: [(u64, u64); 2] = [(31, 4), (31, 17)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `c_i = i (p - 1) / 5` for `i = 1..4`, at primes `p ≡ 1 mod 5`.
    Quintic,
    /// `c = (1, p - 2, c3)` for every admissible `c3`, at primes `p >= 5`.
    TripleGap,
    Explicit(Vec<u64>),
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Quintic => "quintic",
            FamilyKind::TripleGap => "triplegap",
            FamilyKind::Explicit(_) => "explicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// Inclusive range of primes.
    pub p_range: (u64, u64),
    pub m_max: u32,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, p_range: (u64, u64), m_max: u32) -> Result<Self> {
        if p_range.0 > p_range.1 {
            return Err(Error::MalformedInput(format!(
                "empty prime range {}..{}",
                p_range.0, p_range.1
            )));
        }
        if m_max == 0 {
            return Err(Error::MalformedInput("m_max must be at least 1".into()));
        }
        if let FamilyKind::Explicit(c) = &kind {
            if c.is_empty() {
                return Err(Error::InvalidDatum("empty exponent list".into()));
            }
        }
        Ok(FamilySpec { kind, p_range, m_max })
    }

    /// Members of the family in sweep order. Primes at which the family is
    /// undefined are returned separately.
    pub fn members(&self) -> Result<(Vec<FamilyMember>, Vec<u64>)> {
        let mut out = Vec::new();
        let mut skipped = Vec::new();
        for p in primes_in(self.p_range.0, self.p_range.1) {
            match &self.kind {
                FamilyKind::Quintic => {
                    if p % 5 != 1 {
                        skipped.push(p);
                        continue;
                    }
                    out.push(FamilyMember { datum: quintic_datum(p)?, c3: None });
                }
                FamilyKind::TripleGap => {
                    if p < 5 {
                        skipped.push(p);
                        continue;
                    }
                    for c3 in admissible_c3(p) {
                        out.push(FamilyMember {
                            datum: triple_gap_datum(p, c3)?,
                            c3: Some(c3),
                        });
                    }
                }
                FamilyKind::Explicit(c) => {
                    let n = c.len() as u64;
                    match HypergeometricDatum::new(p, c.clone()) {
                        Ok(datum) if p > n => out.push(FamilyMember { datum, c3: None }),
                        _ => skipped.push(p),
                    }
                }
            }
        }
        Ok((out, skipped))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub datum: HypergeometricDatum,
    /// The free exponent of a triple-gap datum.
    pub c3: Option<u64>,
}

pub fn quintic_datum(p: u64) -> Result<HypergeometricDatum> {
    if p % 5 != 1 {
        return Err(Error::InvalidDatum(format!("quintic family needs p ≡ 1 mod 5, got {p}")));
    }
    HypergeometricDatum::new(p, (1..=4).map(|i| i * (p - 1) / 5).collect())
}

fn check_triple_gap(p: u64, c3: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    if c3 == 0 || c3 > p - 2 || 2 * c3 == p - 1 {
        return Err(Error::InvalidC3 { p, c3 });
    }
    Ok(())
}

pub fn admissible_c3(p: u64) -> Vec<u64> {
    (1..=p.saturating_sub(2)).filter(|&c3| 2 * c3 != p - 1).collect()
}

pub fn triple_gap_datum(p: u64, c3: u64) -> Result<HypergeometricDatum> {
    check_triple_gap(p, c3)?;
    HypergeometricDatum::new(p, vec![1, p - 2, c3])
}

/// `-(2 c3)^(-1) mod p`.
pub fn triple_gap_point(p: u64, c3: u64) -> Result<u64> {
    check_triple_gap(p, c3)?;
    let inv = inv_mod(2 * c3 % p, p).ok_or(Error::InvalidC3 { p, c3 })?;
    Ok((p - inv) % p)
}

/// Slope reports for every closed point of degree `1..=m_max`, ordered by
/// degree and then by the discrete log of the representative.
pub fn scan_points(engine: &HyperEngine, datum: &HypergeometricDatum, m_max: u32) -> Result<Vec<SlopeReport>> {
    let points = closed_points(engine, datum.p(), m_max)?;
    points
        .par_iter()
        .map(|pt| engine.slopes_at_point(datum, pt, StrategyChoice::Auto, PrecisionChoice::Auto))
        .collect()
}

fn closed_points(engine: &HyperEngine, p: u64, m_max: u32) -> Result<Vec<PointSpec>> {
    let mut points = Vec::new();
    for m in 1..=m_max {
        points.extend(PointSpec::enumerate(&engine.field(p, m)?)?);
    }
    Ok(points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleGapCheck {
    pub p: u64,
    pub c3: u64,
    pub predicted_x: u64,
    /// Degree-one points with `a_1 - a_2 > 1`.
    pub violations: Vec<u64>,
    pub a1_at_predicted: String,
    pub holds: bool,
}

fn triple_gap_check(p: u64, c3: u64, records: &[SlopeRecord]) -> Result<TripleGapCheck> {
    let predicted_x = triple_gap_point(p, c3)?;
    let mut violations = Vec::new();
    let mut a1 = None;
    for r in records.iter().filter(|r| r.m == 1) {
        let x: u64 = r.x.parse().map_err(|_| Error::Inconsistent(format!("bad label {}", r.x)))?;
        let s = r.slopes()?;
        if s[0].clone() - s[1].clone() > crate::Rational::from_integer(1.into()) {
            violations.push(x);
        }
        if x == predicted_x {
            a1 = Some(s[0].clone());
        }
    }
    let a1 = a1.ok_or_else(|| Error::Inconsistent(format!("point {predicted_x} missing from scan")))?;
    let holds = violations == [predicted_x] && a1 == crate::Rational::from_integer(2.into());
    Ok(TripleGapCheck {
        p,
        c3,
        predicted_x,
        violations,
        a1_at_predicted: a1.to_string(),
        holds,
    })
}

/// Scans `c = (1, p - 2, c3)` over the degree-one points and checks that
/// exactly one of them has `a_1 - a_2 > 1`, namely `-(2 c3)^(-1)`, with `a_1 = 2`.
pub fn verify_triple_gap_uniqueness(engine: &HyperEngine, p: u64, c3: u64) -> Result<TripleGapCheck> {
    let datum = triple_gap_datum(p, c3)?;
    let records: Vec<SlopeRecord> = scan_points(engine, &datum, 1)?
        .iter()
        .map(|r| SlopeRecord::from_report(&datum, r, StrategyChoice::Auto, PrecisionChoice::Auto))
        .collect();
    triple_gap_check(p, c3, &records)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub p: u64,
    pub c: Vec<u64>,
    pub m: u32,
    pub x: String,
    pub slopes: Vec<String>,
    pub max_gap: String,
    /// The point was known in advance to violate small gaps; all others are discoveries.
    pub predicted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumScan {
    pub p: u64,
    pub c: Vec<u64>,
    pub points: Vec<SlopeRecord>,
}

/// Output of [`scan_family`]. Contains no timing, so reruns compare byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub schema_version: String,
    pub family: String,
    pub p_range: [u64; 2],
    pub m_max: u32,
    pub strategy: String,
    pub skipped_primes: Vec<u64>,
    pub datums: Vec<DatumScan>,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple_gap_checks: Option<Vec<TripleGapCheck>>,
    pub summary: String,
}

impl CounterexampleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Worker threads; `None` uses the rayon default.
    pub workers: Option<usize>,
    pub checkpoint: Option<PathBuf>,
}

type CheckpointKey = (u64, Vec<u64>, u32, String);

fn key_of(r: &SlopeRecord) -> CheckpointKey {
    let point = r.rep_dlog.map_or_else(|| r.x.clone(), |d| d.to_string());
    (r.p, r.c.clone(), r.m, point)
}

/// Records already present in a checkpoint file. A truncated final line
/// (from an interrupted append) is ignored.
pub fn read_checkpoint(path: &Path) -> Result<HashMap<CheckpointKey, SlopeRecord>> {
    let mut out = HashMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(Error::Io(e.to_string())),
    };
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::Io(e.to_string()))?;
    let count = lines.len();
    for (i, line) in lines.into_iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<SlopeRecord>(&line) {
            Ok(r) => {
                if r.schema_version != SCHEMA_VERSION {
                    return Err(Error::Checkpoint(format!(
                        "line {} has schema version {}",
                        i + 1,
                        r.schema_version
                    )));
                }
                out.insert(key_of(&r), r);
            }
            Err(_) if i + 1 == count => {}
            Err(e) => return Err(Error::Checkpoint(format!("line {}: {e}", i + 1))),
        }
    }
    Ok(out)
}

struct CheckpointWriter {
    out: Mutex<BufWriter<File>>,
}

impl CheckpointWriter {
    fn open(path: &Path) -> Result<Self> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        // drop a torn final line left by an interrupted append
        if let Ok(bytes) = std::fs::read(path) {
            if bytes.last().is_some_and(|&b| b != b'\n') {
                let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
                OpenOptions::new().write(true).open(path).and_then(|f| f.set_len(keep as u64)).map_err(io)?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        Ok(CheckpointWriter {
            out: Mutex::new(BufWriter::new(file)),
        })
    }

    fn append(&self, record: &SlopeRecord) -> Result<()> {
        let line = serde_json::to_string(record).map_err(|e| Error::Checkpoint(e.to_string()))?;
        let mut out = self.out.lock().expect("checkpoint lock poisoned");
        writeln!(out, "{line}")
            .and_then(|_| out.flush())
            .map_err(|e| Error::Io(e.to_string()))
    }
}

fn is_predicted(kind: &FamilyKind, c3: Option<u64>, record: &SlopeRecord) -> bool {
    if record.m != 1 {
        return false;
    }
    let Ok(x) = record.x.parse::<u64>() else {
        return false;
    };
    match kind {
        FamilyKind::Quintic => KNOWN_QUINTIC_GAP_POINTS.contains(&(record.p, x)),
        FamilyKind::TripleGap => c3.and_then(|c3| triple_gap_point(record.p, c3).ok()) == Some(x),
        FamilyKind::Explicit(_) => false,
    }
}

/// Sweeps every datum of the family over all closed points of degree up to `m_max`.
pub fn scan_family(engine: &HyperEngine, spec: &FamilySpec, options: &ScanOptions) -> Result<CounterexampleReport> {
    let (members, skipped) = spec.members()?;
    let done = match &options.checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => HashMap::new(),
    };
    let writer = options.checkpoint.as_deref().map(CheckpointWriter::open).transpose()?;

    let mut items: Vec<(usize, PointSpec)> = Vec::new();
    for (i, member) in members.iter().enumerate() {
        for pt in closed_points(engine, member.datum.p(), spec.m_max)? {
            items.push((i, pt));
        }
    }
    let run = |(i, pt): &(usize, PointSpec)| -> Result<SlopeRecord> {
        let datum = &members[*i].datum;
        let key = (datum.p(), datum.c().to_vec(), pt.degree(), pt.rep_dlog().map_or_else(|| pt.label(), |d| d.to_string()));
        if let Some(r) = done.get(&key) {
            return Ok(r.clone());
        }
        let report = engine.slopes_at_point(datum, pt, StrategyChoice::Auto, PrecisionChoice::Auto)?;
        let record = SlopeRecord::from_report(datum, &report, StrategyChoice::Auto, PrecisionChoice::Auto);
        if let Some(w) = &writer {
            w.append(&record)?;
        }
        Ok(record)
    };
    let records: Vec<SlopeRecord> = match options.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| items.par_iter().map(run).collect::<Result<_>>())?,
        None => items.par_iter().map(run).collect::<Result<_>>()?,
    };

    let mut scans: Vec<DatumScan> = members
        .iter()
        .map(|member| DatumScan {
            p: member.datum.p(),
            c: member.datum.c().to_vec(),
            points: Vec::new(),
        })
        .collect();
    for ((i, _), r) in items.iter().zip(records) {
        scans[*i].points.push(r);
    }
    let violations: Vec<Violation> = scans
        .iter()
        .zip(&members)
        .flat_map(|(s, member)| s.points.iter().map(move |r| (r, member.c3)))
        .filter(|(r, _)| r.violates_small_gaps)
        .map(|(r, c3)| Violation {
            p: r.p,
            c: r.c.clone(),
            m: r.m,
            x: r.x.clone(),
            slopes: r.slopes.clone(),
            max_gap: r.max_gap.clone(),
            predicted: is_predicted(&spec.kind, c3, r),
        })
        .collect();

    let triple_gap_checks = match spec.kind {
        FamilyKind::TripleGap => Some(
            scans
                .iter()
                .zip(&members)
                .map(|(s, member)| triple_gap_check(s.p, member.c3.expect("triple-gap member"), &s.points))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => None,
    };
    let summary = match &triple_gap_checks {
        Some(checks) => {
            let failed: Vec<String> = checks
                .iter()
                .filter(|c| !c.holds)
                .map(|c| format!("(p={}, c3={})", c.p, c.c3))
                .collect();
            if failed.is_empty() {
                format!("all triple-gap uniqueness checks passed ({} datums)", checks.len())
            } else {
                format!("triple-gap uniqueness failed for {}", failed.join(", "))
            }
        }
        None if violations.is_empty() => "no gap-violating points".to_string(),
        None => {
            let list: Vec<String> = violations.iter().map(|v| format!("({}, {})", v.p, v.x)).collect();
            format!("{} gap-violating points: {}", violations.len(), list.join(", "))
        }
    };

    Ok(CounterexampleReport {
        schema_version: SCHEMA_VERSION.to_string(),
        family: spec.kind.name().to_string(),
        p_range: [spec.p_range.0, spec.p_range.1],
        m_max: spec.m_max,
        strategy: StrategyChoice::Auto.to_string(),
        skipped_primes: skipped,
        datums: scans,
        violations,
        triple_gap_checks,
        summary,
    })
}
