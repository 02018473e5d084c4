//! Command-line front end. Every subcommand prints JSON (tables may also be
//! written as CSV) and maps outcomes to exit codes: 0 success, 1 a checked
//! property failed, 2 invalid input.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Serialize;

use crate::census::{self, CensusRecord, DEFAULT_CEILING};
use crate::curve::{LineBundle, ProjPoint, StackyCurveP1};
use crate::diophantine::{self, HasseReport};
use crate::error::{Error, Result};
use crate::report::{ser_display, write_csv, write_json};
use crate::vojta;

#[derive(Debug, Parser)]
#[command(name = "stacky", version, about = "Exact heights and point counts on stacky curves over P^1/Q")]
pub struct Cli {
    /// Worker threads for census and scan operations.
    #[arg(long, global = true, env = "STACKY_THREADS")]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact height of a point.
    Height(HeightArgs),
    /// Bounded-height point counts.
    Census(CensusArgs),
    /// Whether a point is integral on a curve.
    Integral {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Conic solubility and integral-point reconstruction on a (2,2,2) curve.
    Hasse {
        #[arg(long)]
        curve: String,
    },
    /// abc hits with c <= N, best quality first.
    Abc {
        #[arg(long = "N", alias = "n")]
        n: u64,
        /// Rows to print.
        #[arg(long, default_value_t = 50)]
        top: usize,
    },
    /// Dual feasibility of the height linear program.
    Lp {
        /// Multiplicities, e.g. `2,3,7`.
        #[arg(long)]
        m: String,
        #[arg(long, default_value = "0")]
        eps: String,
        /// With `--curve`, also check weak duality at this point.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long)]
        curve: Option<String>,
    },
    /// Counts under perturbed heights over ladders of delta and B.
    Northcott {
        #[arg(long)]
        curve: String,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        deltas: String,
        #[arg(long = "C", alias = "c")]
        c: u64,
        #[arg(long = "B-ladder", alias = "b-ladder")]
        b_ladder: String,
    },
    /// `H_K H_{-K} <= rad(xy(x+y))` over a box on a curve supported on 0, inf, -1.
    Radical {
        #[arg(long)]
        curve: String,
        #[arg(long = "B", alias = "b")]
        b: u64,
        #[arg(long, default_value = "1/10")]
        eps: String,
        /// Print one row per point instead of the summary.
        #[arg(long)]
        rows: bool,
    },
    /// Fast consistency checks across all modules.
    Selftest,
}

#[derive(Debug, Args)]
pub struct HeightArgs {
    #[arg(long)]
    pub curve: String,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Bundle as `d;d_1,...,d_r`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["canonical", "anticanonical", "perturbed"])]
    pub bundle: Option<String>,
    #[arg(long)]
    pub canonical: bool,
    #[arg(long)]
    pub anticanonical: bool,
    /// Perturbed height with this exponent on `max`.
    #[arg(long, allow_hyphen_values = true)]
    pub perturbed: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CensusKind {
    N2,
    Nm,
    Integral222,
    Generic,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(value_enum)]
    pub kind: CensusKind,
    /// A single threshold.
    #[arg(long = "T", alias = "t")]
    pub t: Option<u64>,
    /// Thresholds: items `n`, `b^k` or `b^i..b^j`, comma-separated.
    #[arg(long = "T-ladder", alias = "t-ladder")]
    pub t_ladder: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    pub ceiling: u64,
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub bundle: Option<String>,
    /// Box bound for the generic census.
    #[arg(long = "B", alias = "b")]
    pub b: Option<u64>,
}

/// Accepts `p/q`, integers and decimals such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::parse(format!("invalid rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::domain(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 17 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            w => w.parse().map_err(|_| bad())?,
        };
        let den = 10i64.pow(frac.len() as u32);
        let num = whole
            .checked_mul(den)
            .and_then(|w| w.checked_add(frac.parse::<i64>().ok()?))
            .ok_or_else(bad)?;
        return Ok(Rational64::new(if neg { -num } else { num }, den));
    }
    Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?))
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn parse_power(s: &str) -> Result<(u64, u32)> {
    let bad = || Error::parse(format!("invalid ladder item `{s}`"));
    match s.split_once('^') {
        Some((b, k)) => Ok((b.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?)),
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
    }
}

fn pow_checked(b: u64, k: u32) -> Result<u64> {
    b.checked_pow(k).ok_or_else(|| Error::Overflow(format!("{b}^{k}")))
}

/// Parses `n`, `b^k` and `b^i..b^j` items, comma-separated. Empty text is an
/// empty ladder.
pub fn parse_ladder(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let ((b1, i), (b2, j)) = (parse_power(lo)?, parse_power(hi)?);
                if b1 != b2 || b1 < 2 || !lo.contains('^') || !hi.contains('^') {
                    return Err(Error::parse(format!("range `{item}` must read b^i..b^j")));
                }
                for k in i..=j {
                    out.push(pow_checked(b1, k)?);
                }
            }
            None => {
                let (b, k) = parse_power(item)?;
                out.push(pow_checked(b, k)?);
            }
        }
    }
    Ok(out)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|i| !i.is_empty())
        .map(|i| i.parse().map_err(|_| Error::parse(format!("invalid {what} `{i}`"))))
        .collect()
}

struct Out {
    format: Format,
    sink: Box<dyn Write>,
}

impl Out {
    fn json<T: Serialize + ?Sized>(&mut self, v: &T) -> Result<()> {
        write_json(&mut self.sink, v)
    }

    fn table<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        match self.format {
            Format::Json => write_json(&mut self.sink, rows),
            Format::Csv => write_csv(&mut self.sink, rows),
        }
    }
}

#[derive(Serialize)]
struct HeightOut {
    curve: String,
    bundle: String,
    point: String,
    #[serde(rename = "L")]
    power: u64,
    #[serde(serialize_with = "ser_display")]
    value: BigRational,
    approx: f64,
}

fn cmd_height(a: &HeightArgs) -> Result<HeightOut> {
    let curve: StackyCurveP1 = a.curve.parse()?;
    let t: ProjPoint = a.point.parse()?;
    if curve.is_stacky_point(&t) {
        return Err(Error::domain(format!("{t} is a stacky point of {curve}")));
    }
    let (label, h) = if let Some(d) = &a.perturbed {
        let delta = parse_rational(d)?;
        (format!("perturbed {delta}"), curve.perturbed_height(&t, delta)?)
    } else if a.canonical {
        ("canonical".to_string(), curve.canonical_height(&t)?)
    } else if a.anticanonical {
        ("anticanonical".to_string(), curve.anticanonical_height(&t)?)
    } else {
        let text = a
            .bundle
            .as_deref()
            .ok_or_else(|| Error::parse("one of --bundle, --canonical, --anticanonical, --perturbed is required"))?;
        let bundle = LineBundle::parse(text, &curve)?;
        (bundle.to_string(), curve.height(&bundle, &t)?)
    };
    Ok(HeightOut {
        curve: curve.to_string(),
        bundle: label,
        point: t.to_string(),
        power: h.lcm_power(),
        value: h.value().clone(),
        approx: h.approx(),
    })
}

#[derive(Serialize)]
struct IntegralRow {
    #[serde(rename = "T")]
    t: u64,
    count: u64,
    oracle: u64,
    agrees: bool,
}

fn thresholds(a: &CensusArgs) -> Result<Vec<u64>> {
    let mut ts = match &a.t_ladder {
        Some(l) => parse_ladder(l)?,
        None => Vec::new(),
    };
    ts.extend(a.t);
    Ok(ts)
}

fn cmd_census(a: &CensusArgs, out: &mut Out) -> Result<bool> {
    let ts = thresholds(a)?;
    match a.kind {
        CensusKind::N2 => {
            let recs = census::n2_ladder(&ts, a.ceiling)?;
            out.table(&census::ratio_table(&recs, 0.5, 3))?;
        }
        CensusKind::Nm => out.table(&census::nm_ladder(&ts, a.m, a.ceiling)?)?,
        CensusKind::Integral222 => {
            let rows = ts
                .iter()
                .map(|&t| {
                    let rec = census::integral_census_222(t)?;
                    let oracle = census::pythagorean_integral_points(t).len() as u64;
                    Ok(IntegralRow {
                        t,
                        count: rec.count,
                        oracle,
                        agrees: rec.count == oracle,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.table(&rows)?;
            return Ok(rows.iter().all(|r| r.agrees));
        }
        CensusKind::Generic => {
            let curve: StackyCurveP1 = a
                .curve
                .as_deref()
                .ok_or_else(|| Error::parse("generic census needs --curve"))?
                .parse()?;
            let bundle = match &a.bundle {
                Some(s) => LineBundle::parse(s, &curve)?,
                None => curve.anticanonical_bundle(),
            };
            let b = a.b.ok_or_else(|| Error::parse("generic census needs --B"))?;
            let recs = ts
                .iter()
                .map(|&t| census::generic_bounded_height_census(&curve, &bundle, t, b))
                .collect::<Result<Vec<CensusRecord>>>()?;
            out.table(&recs)?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct IntegralOut {
    curve: String,
    point: String,
    integral: bool,
}

#[derive(Serialize)]
struct LpOut {
    m: Vec<u32>,
    #[serde(serialize_with = "ser_display")]
    epsilon: BigRational,
    feasible: bool,
    tight: bool,
    #[serde(serialize_with = "ser_display")]
    dual_coefficient: BigRational,
    #[serde(serialize_with = "ser_display")]
    minus_chi_minus_eps: BigRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<LpPointOut>,
}

#[derive(Serialize)]
struct LpPointOut {
    point: String,
    z: Vec<Vec<u64>>,
    weak_duality: bool,
    primal_value: f64,
    dual_value: f64,
    /// The row-0 constant is `log rad(prod lambda_i)`; this is the epsilon it
    /// corresponds to on the `log max` scale.
    effective_epsilon: Option<f64>,
}

fn cmd_lp(m: &str, eps: &str, curve: Option<&str>, point: Option<&str>) -> Result<(LpOut, bool)> {
    let ms: Vec<u32> = parse_list(m, "multiplicity")?;
    let epsilon = big(parse_rational(eps)?);
    let inst = vojta::lp_build(&ms, &epsilon)?;
    let d = vojta::dual_feasible_check(&inst);
    let mut ok = d.passes();
    let point = match (curve, point) {
        (Some(c), Some(p)) => {
            let curve: StackyCurveP1 = c.parse()?;
            if curve.multiplicities() != ms {
                return Err(Error::parse(format!("--m {m} does not match curve {curve}")));
            }
            let plp = vojta::point_exponent_vector(&curve, &p.parse()?)?;
            let weak = plp.weak_duality()?;
            ok &= weak;
            Some(LpPointOut {
                point: plp.point.to_string(),
                z: plp.z_vectors(),
                weak_duality: weak,
                primal_value: plp.primal_value().to_f64(),
                dual_value: plp.dual_value().to_f64(),
                effective_epsilon: plp.effective_epsilon(),
            })
        }
        (None, None) => None,
        _ => return Err(Error::parse("--point and --curve go together")),
    };
    Ok((
        LpOut {
            m: ms,
            epsilon,
            feasible: d.feasible,
            tight: d.tight,
            dual_coefficient: d.dual_value_coefficient,
            minus_chi_minus_eps: d.expected,
            point,
        },
        ok,
    ))
}

#[derive(Debug, Serialize)]
pub struct SelfCheck {
    pub check: &'static str,
    pub pass: bool,
}

/// Quick checks over every module; each entry is a small instance of an
/// identity the library maintains.
pub fn selftest() -> Result<Vec<SelfCheck>> {
    use crate::arith::{phi_m, r_m, rad_m};
    use num_bigint::BigUint;
    let mut out = Vec::new();
    let mut push = |check, pass| out.push(SelfCheck { check, pass });

    let mut ok = true;
    for n in 1..=2000u64 {
        for m in 2..=6u32 {
            let lhs = phi_m(n, m)? * BigUint::from(r_m(n, m)?);
            ok &= lhs == BigUint::from(rad_m(n, m)?).pow(m);
        }
    }
    push("phi_m r_m = rad_m^m", ok);

    let c: StackyCurveP1 = "0:2,inf:2,-1:2".parse()?;
    let t: ProjPoint = "3/4".parse()?;
    let h = c.anticanonical_height(&t)?;
    push("anticanonical height at 3/4", h.lcm_power() == 2 && h.value() == &BigRational::from_integer(84.into()));
    let dual = c.dual_product(&c.anticanonical_bundle(), &t)?;
    let prod = c.canonical_height(&t)?.mul(&h);
    push(
        "duality product at 3/4",
        dual == BigUint::from(21u32) && prod == crate::curve::ExactHeight::from_integer(1, dual),
    );

    let ok = [100u64, 1000, 10_000]
        .iter()
        .map(|&t| Ok(census::integral_census_222(t)?.count == census::pythagorean_integral_points(t).len() as u64))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    push("integral census against Pythagorean triples", ok);

    let mut ok = true;
    for x1 in 1..=30u64 {
        for x2 in 1..=30 / x1 {
            for x3 in 1..=30 / (x1 * x2) {
                let Ok(f) = diophantine::f_s_indicator(x1, x2, x3) else { continue };
                let form = diophantine::TernaryDiagonalForm::new(x1 as i64, x2 as i64, -(x3 as i64))?;
                let leg = diophantine::legendre_solvable(&form)?;
                let wit = diophantine::holzer_search(&form, diophantine::SEARCH_CEILING)?;
                ok &= (f == 1) == leg && leg == wit.is_some();
            }
        }
    }
    push("f_S, Legendre and witness search agree", ok);

    let r = diophantine::hasse_integral_check(&c)?;
    let ok = r.soluble
        && match r.integral_point {
            Some([x, y]) => diophantine::is_integral_point(&c, &ProjPoint::new(x, y)?)?,
            None => false,
        };
    push("Hasse reconstruction on 0:2,inf:2,-1:2", ok);

    let d = vojta::dual_feasible_check(&vojta::lp_build(&[2, 3, 7], &BigRational::new(1.into(), 100.into()))?);
    push("dual vector for (2,3,7)", d.passes());

    push("abc scan against direct enumeration", vojta::abc_scan(1000)? == vojta::abc_scan_naive(1000)?);

    let rep = vojta::radical_inequality_report(&StackyCurveP1::standard(2, 3, 7)?, 50, 0.1)?;
    push("radical inequality on (2,3,7)", rep.violations == 0);

    let table = vojta::northcott_gamma_probe(
        &StackyCurveP1::standard(2, 2, 2)?,
        &[Rational64::new(1, 2)],
        10,
        &[50, 100, 150],
    )?;
    push("Northcott stabilization on (2,2,2)", table.stabilized());
    Ok(out)
}

fn run(cli: &Cli, out: &mut Out) -> Result<bool> {
    match &cli.command {
        Command::Height(a) => out.json(&cmd_height(a)?).map(|_| true),
        Command::Census(a) => cmd_census(a, out),
        Command::Integral { curve, point } => {
            let c: StackyCurveP1 = curve.parse()?;
            let t: ProjPoint = point.parse()?;
            let integral = diophantine::is_integral_point(&c, &t)?;
            out.json(&IntegralOut {
                curve: c.to_string(),
                point: t.to_string(),
                integral,
            })?;
            Ok(true)
        }
        Command::Hasse { curve } => {
            let c: StackyCurveP1 = curve.parse()?;
            let r: HasseReport = diophantine::hasse_integral_check(&c)?;
            let ok = match r.integral_point {
                Some([x, y]) => diophantine::is_integral_point(&c, &ProjPoint::new(x, y)?)?,
                None => true,
            };
            out.json(&r)?;
            Ok(ok)
        }
        Command::Abc { n, top } => {
            let hits = vojta::abc_scan(*n)?;
            out.table(vojta::top(&hits, *top))?;
            Ok(true)
        }
        Command::Lp { m, eps, point, curve } => {
            let (r, ok) = cmd_lp(m, eps, curve.as_deref(), point.as_deref())?;
            out.json(&r)?;
            Ok(ok)
        }
        Command::Northcott { curve, deltas, c, b_ladder } => {
            let cv: StackyCurveP1 = curve.parse()?;
            let ds = deltas
                .split(',')
                .map(str::trim)
                .filter(|d| !d.is_empty())
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            let table = vojta::northcott_gamma_probe(&cv, &ds, *c, &parse_ladder(b_ladder)?)?;
            match out.format {
                Format::Json => out.json(&table)?,
                Format::Csv => out.table(&table.rows)?,
            }
            Ok(table.stabilized())
        }
        Command::Radical { curve, b, eps, rows } => {
            let cv: StackyCurveP1 = curve.parse()?;
            let e = parse_rational(eps)?;
            let e = *e.numer() as f64 / *e.denom() as f64;
            if *rows {
                let rs = vojta::radical_inequality_rows(&cv, *b)?;
                out.table(&rs)?;
                Ok(rs.iter().all(|r| r.holds))
            } else {
                let rep = vojta::radical_inequality_report(&cv, *b, e)?;
                out.json(&rep)?;
                Ok(rep.violations == 0)
            }
        }
        Command::Selftest => {
            let checks = selftest()?;
            out.table(&checks)?;
            Ok(checks.iter().all(|c| c.pass))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 1,
        _ => 2,
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let sink: Box<dyn Write> = match &cli.output {
        Some(p) => match File::create(p) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let mut out = Out {
        format: cli.format,
        sink,
    };
    let result = run(&cli, &mut out);
    if let Err(e) = out.sink.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/100").unwrap(), Rational64::new(1, 100));
        assert_eq!(parse_rational("-3").unwrap(), Rational64::from_integer(-3));
        assert_eq!(parse_rational("0.25").unwrap(), Rational64::new(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational64::new(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn ladders() {
        assert_eq!(parse_ladder("2^8..2^10").unwrap(), vec![256, 512, 1024]);
        assert_eq!(parse_ladder("10, 3^2,7").unwrap(), vec![10, 9, 7]);
        assert!(parse_ladder("").unwrap().is_empty());
        assert!(parse_ladder("2^3..3^4").is_err());
        assert!(parse_ladder("2^70").is_err());
    }

    #[test]
    fn height_example() {
        let a = HeightArgs {
            curve: "0:2,inf:2,-1:2".into(),
            point: "3/4".into(),
            bundle: None,
            canonical: false,
            anticanonical: true,
            perturbed: None,
        };
        let h = cmd_height(&a).unwrap();
        assert_eq!((h.power, h.value.to_string()), (2, "84".to_string()));
        let a = HeightArgs {
            point: "0".into(),
            ..a
        };
        assert!(matches!(cmd_height(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn lp_example() {
        let (r, ok) = cmd_lp("2,3,7", "1/100", None, None).unwrap();
        assert!(ok && r.feasible && r.tight);
        assert_eq!(r.dual_coefficient.to_string(), "29/2100");
        let (r, ok) = cmd_lp("2,2,2", "0", Some("0:2,inf:2,-1:2"), Some("3/4")).unwrap();
        assert!(ok);
        assert_eq!(r.point.unwrap().z, vec![vec![3, 1], vec![1, 2], vec![7, 1]]);
    }

    #[test]
    fn selftest_passes() {
        assert!(selftest().unwrap().iter().all(|c| c.pass));
    }
}
