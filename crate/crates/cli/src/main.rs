//! `isoslope`: slopes of hypergeometric local systems, family scans and
//! coweight calculations from the command line.
//!
//! Exit codes: 0 on success, 2 when a computation fails (a JSON error record
//! is printed on standard output), 64 on bad usage.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use isoslope::arith::FieldConfig;
use isoslope::coweight::{
    cohomology_slope_interval, dominance_leq, hecke_newton, newton_to_slopes, pgl3_region, rho_check, small_gaps,
    RationalCoweight, RootDatum,
};
use isoslope::hyper::{EngineConfig, HyperEngine, HypergeometricDatum, PointSpec, PrecisionChoice, StrategyChoice};
use isoslope::record::{parse_rational, parse_rational_list, rational_to_string, ErrorRecord, SlopeRecord, SCHEMA_VERSION};
use isoslope::scan::{scan_family, FamilyKind, FamilySpec, ScanOptions};
use isoslope::{Error, Rational};

const EXIT_MATH: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "isoslope", version, about = "Exact p-adic slopes of hypergeometric local systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Slopes at one point, or at every closed point of a given degree.
    Slopes(SlopesArgs),
    /// Sweep a family of datums for points with a slope gap above 1.
    Scan(ScanArgs),
    /// Newton function and slopes from Hecke eigenvalue valuations.
    Hecke(HeckeArgs),
    /// Dominance, small gaps, rho and cohomological slope intervals.
    #[command(subcommand)]
    Coweight(CoweightCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Tsv,
}

#[derive(Args)]
struct SlopesArgs {
    #[arg(long)]
    p: u64,
    /// Comma-separated exponents c_i in 1..=p-2.
    #[arg(long)]
    c: String,
    /// Point: an integer, or `:`-separated coefficients for degree above one.
    #[arg(long)]
    x: Option<String>,
    /// Degree of the closed point(s).
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// full, det, selfdual, dualpair or auto.
    #[arg(long, default_value = "auto")]
    strategy: String,
    /// Working p-adic precision, or auto.
    #[arg(long, default_value = "auto")]
    precision: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Quintic,
    Triplegap,
    Explicit,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Inclusive prime range `a..b`.
    #[arg(long)]
    p_range: String,
    /// Exponents for the explicit family.
    #[arg(long)]
    c: Option<String>,
    #[arg(long, default_value_t = 1)]
    m_max: u32,
    /// Newline-delimited JSON file of finished points; resumed from when present.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report here and print the summary line on standard output.
    /// Without it the report goes to standard output and the summary to standard error.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct HeckeArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated valuations v(t_1), ..., v(t_n).
    #[arg(long, allow_hyphen_values = true)]
    t_vals: String,
    /// Classify (v(t_1), v(t_2)) in the PGL(3) regions (needs n = 3).
    #[arg(long)]
    pgl3: bool,
}

#[derive(Subcommand)]
enum CoweightCommand {
    /// Small-gaps test for a dominant coweight.
    SmallGaps {
        /// GL<n>, SL<n> or cartan:<file>.
        #[arg(long = "type")]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        coweight: String,
    },
    /// Half the sum of the positive coroots.
    Rho {
        #[arg(long = "type")]
        kind: String,
    },
    /// Dominance order a <= b.
    Leq {
        #[arg(long = "type")]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Slope interval of degree-i cohomology.
    Cohinterval {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long)]
        n: i64,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::MalformedInput(msg.into())
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn engine() -> Result<HyperEngine, Error> {
    Ok(HyperEngine::new(EngineConfig {
        field: FieldConfig::from_env()?,
        ..Default::default()
    }))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational_to_string).collect()
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("record serializes"));
}

fn write_rows(records: &[SlopeRecord], format: Format, out: &mut dyn Write) -> Result<(), Error> {
    let delimiter = if format == Format::Tsv { b'\t' } else { b',' };
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(SlopeRecord::COLUMNS).map_err(io)?;
    for r in records {
        w.write_record(r.to_row()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn emit(records: &[SlopeRecord], format: Format) -> Result<(), Error> {
    match format {
        Format::Json => {
            records.iter().for_each(print_json);
            Ok(())
        }
        _ => write_rows(records, format, &mut std::io::stdout().lock()),
    }
}

fn cmd_slopes(args: SlopesArgs) -> Result<(), Error> {
    let strategy: StrategyChoice = args.strategy.parse()?;
    let precision: PrecisionChoice = args.precision.parse()?;
    let c = parse_list::<u64>(&args.c, "c")?;
    let datum = HypergeometricDatum::new(args.p, c)?;
    if args.m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let engine = engine()?;
    let field = engine.field(args.p, args.m)?;
    let points = match &args.x {
        Some(x) => vec![PointSpec::parse(field, x)?],
        None => PointSpec::enumerate(&field)?,
    };
    let mut records = Vec::with_capacity(points.len());
    for pt in &points {
        let start = Instant::now();
        let report = engine.slopes_at_point(&datum, pt, strategy, precision)?;
        let mut record = SlopeRecord::from_report(&datum, &report, strategy, precision);
        record.timing_ms = Some(start.elapsed().as_millis() as u64);
        records.push(record);
    }
    emit(&records, args.format)
}

fn parse_p_range(text: &str) -> Result<(u64, u64), Error> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| usage(format!("--p-range must look like a..b, got {text:?}")))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad prime bound {t:?}")));
    Ok((parse(a)?, parse(b)?))
}

fn cmd_scan(args: ScanArgs) -> Result<(), Error> {
    let kind = match (args.family, &args.c) {
        (Family::Quintic, None) => FamilyKind::Quintic,
        (Family::Triplegap, None) => FamilyKind::TripleGap,
        (Family::Explicit, Some(c)) => FamilyKind::Explicit(parse_list(c, "c")?),
        (Family::Explicit, None) => return Err(usage("--family explicit needs --c")),
        (_, Some(_)) => return Err(usage("--c is only valid with --family explicit")),
    };
    if args.workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let spec = FamilySpec::new(kind, parse_p_range(&args.p_range)?, args.m_max)?;
    let options = ScanOptions {
        workers: args.workers,
        checkpoint: args.checkpoint,
    };
    let start = Instant::now();
    let report = scan_family(&engine()?, &spec, &options)?;
    eprintln!("scan finished in {} ms", start.elapsed().as_millis());

    let body = match args.format {
        Format::Json => report.to_json().into_bytes(),
        format => {
            let records: Vec<SlopeRecord> = report.datums.iter().flat_map(|d| d.points.clone()).collect();
            let mut buf = Vec::new();
            write_rows(&records, format, &mut buf)?;
            buf
        }
    };
    match args.out {
        Some(path) => {
            std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            println!("{}", report.summary);
        }
        None => {
            std::io::stdout().write_all(&body).map_err(|e| Error::Io(e.to_string()))?;
            eprintln!("{}", report.summary);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HeckeRecord {
    schema_version: &'static str,
    n: usize,
    t_vals: Vec<String>,
    newt: Vec<String>,
    slopes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pgl3_region: Option<String>,
}

fn cmd_hecke(args: HeckeArgs) -> Result<(), Error> {
    let t = parse_rational_list(&args.t_vals)?;
    if args.n == 0 || t.len() != args.n {
        return Err(usage(format!("--t-vals has {} entries, --n is {}", t.len(), args.n)));
    }
    if args.pgl3 && args.n != 3 {
        return Err(usage("--pgl3 needs --n 3"));
    }
    let newt = hecke_newton(&t)?;
    let slopes = newton_to_slopes(&newt, &t[args.n - 1])?;
    print_json(&HeckeRecord {
        schema_version: SCHEMA_VERSION,
        n: args.n,
        t_vals: strings(&t),
        newt: strings(newt.values()),
        slopes: strings(slopes.values()),
        pgl3_region: args.pgl3.then(|| pgl3_region(&t[0], &t[1]).to_string()),
    });
    Ok(())
}

fn root_datum(kind: &str) -> Result<RootDatum, Error> {
    match kind.strip_prefix("cartan:") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
            let rows = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    l.split(|ch: char| ch == ',' || ch.is_whitespace())
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<i64>().map_err(|_| usage(format!("bad Cartan entry {t:?}"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            RootDatum::from_cartan(rows)
        }
        None => RootDatum::parse_type(kind),
    }
}

fn coweight(text: &str) -> Result<RationalCoweight<Rational>, Error> {
    Ok(RationalCoweight::new(parse_rational_list(text)?))
}

#[derive(Serialize)]
struct CoweightRecord {
    schema_version: &'static str,
    command: &'static str,
    #[serde(flatten)]
    result: serde_json::Value,
}

fn cmd_coweight(cmd: CoweightCommand) -> Result<(), Error> {
    let (command, result) = match cmd {
        CoweightCommand::SmallGaps { kind, coweight: text } => {
            let datum = root_datum(&kind)?;
            let sg = small_gaps(&coweight(&text)?, &datum)?;
            (
                "small-gaps",
                serde_json::json!({
                    "type": datum.to_string(),
                    "coweight": strings(coweight(&text)?.coords()),
                    "small_gaps": sg.holds,
                    "violating": sg.violating,
                    "i_le1": sg.at_most_one,
                    "levi_is_whole_group": sg.levi_is_whole_group(),
                }),
            )
        }
        CoweightCommand::Rho { kind } => {
            let datum = root_datum(&kind)?;
            let rho = rho_check::<Rational>(&datum)?;
            ("rho", serde_json::json!({ "type": datum.to_string(), "rho": strings(rho.coords()) }))
        }
        CoweightCommand::Leq { kind, a, b } => {
            let datum = root_datum(&kind)?;
            let leq = dominance_leq(&coweight(&a)?, &coweight(&b)?, &datum)?;
            (
                "leq",
                serde_json::json!({
                    "type": datum.to_string(),
                    "a": strings(coweight(&a)?.coords()),
                    "b": strings(coweight(&b)?.coords()),
                    "leq": leq,
                }),
            )
        }
        CoweightCommand::Cohinterval { r, s, i, n } => {
            let (lo, hi) = cohomology_slope_interval(&parse_rational(&r)?, &parse_rational(&s)?, i, n)?;
            (
                "cohinterval",
                serde_json::json!({
                    "r": r.trim(), "s": s.trim(), "i": i, "n": n,
                    "interval": [rational_to_string(&lo), rational_to_string(&hi)],
                }),
            )
        }
    };
    print_json(&CoweightRecord {
        schema_version: SCHEMA_VERSION,
        command,
        result,
    });
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Slopes(args) => cmd_slopes(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Hecke(args) => cmd_hecke(args),
        Command::Coweight(cmd) => cmd_coweight(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_usage() => {
            eprintln!("isoslope: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            print_json(&ErrorRecord::from(&e));
            eprintln!("isoslope: {e}");
            ExitCode::from(EXIT_MATH)
        }
    }
}
