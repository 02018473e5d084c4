//! abc and Vojta experiments: the radical inequality on `(0, inf, -1)`
//! curves, Northcott probes for perturbed heights, abc hits and the linear
//! program bounding the stacky part of `H_{-K}`.

mod abc;
mod lp;

pub use abc::{abc_scan, abc_scan_naive, quality, top, AbcTriple, MAX_SCAN};
pub use lp::{
    dual_feasible_check, lp_build, point_exponent_vector, weak_duality_check,
    weak_duality_check_with, DualCheck, LPInstance, LogLinear, LpScalar, PointLp,
};

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor_u64;
use crate::census::{enumerate_range, exhaustive_box, partition};
use crate::curve::{ExactHeight, LocalValues, ProjPoint, StackyCurveP1};
use crate::error::{Error, Result};
use crate::report::ser_display;

/// Local values of every non-stacky point with `max <= b`, in census order.
pub fn box_points(curve: &StackyCurveP1, b: u64) -> Result<Vec<LocalValues>> {
    let ranges = partition(b, rayon::current_num_threads() * 4);
    let parts: Vec<Result<Vec<LocalValues>>> = ranges
        .into_par_iter()
        .map(|r| {
            enumerate_range(b, r)
                .filter(|p| !curve.is_stacky_point(p))
                .map(|p| curve.local_values(&p))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalRow {
    pub point: ProjPoint,
    pub max: u64,
    /// `H_K * H_{-K}`, an integer.
    #[serde(serialize_with = "ser_display")]
    pub product: BigUint,
    /// `rad(x y (x + y))`.
    pub radical: u64,
    pub holds: bool,
    /// `log rad / log max`; absent at `max = 1`.
    pub log_ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalReport {
    pub curve: String,
    pub bound: u64,
    pub epsilon: f64,
    pub points: u64,
    pub violations: u64,
    /// Smallest `log rad(xy(x+y)) / log max` seen.
    pub min_log_ratio: Option<f64>,
    pub min_log_ratio_point: Option<ProjPoint>,
    /// Points with `rad(xy(x+y))^{1+epsilon} < max`.
    pub below_one_plus_epsilon: u64,
}

fn check_zero_inf_minus_one(curve: &StackyCurveP1) -> Result<()> {
    let mut pts: Vec<ProjPoint> = curve.points().iter().map(|p| p.point).collect();
    pts.sort();
    let mut want = vec![
        ProjPoint::new(0, 1)?,
        ProjPoint::INFINITY,
        ProjPoint::new(-1, 1)?,
    ];
    want.sort();
    if pts != want {
        return Err(Error::Precondition(format!(
            "curve {curve} is not supported on 0, inf, -1"
        )));
    }
    Ok(())
}

fn radical_of(ns: &[u64]) -> u64 {
    let mut primes: Vec<u64> = ns.iter().flat_map(|&n| factor_u64(n).into_keys()).collect();
    primes.sort_unstable();
    primes.dedup();
    primes.iter().product()
}

/// One row. The stable parts `max^{-chi}` and `max^{chi}` of `H_K` and
/// `H_{-K}` cancel, so the product at power `L` is
/// `prod (r_{m_i}(lambda_i) phi_{m_i}(lambda_i))^{L/m_i}`. The radical of
/// `x y (x + y)` comes from a separate factorization.
pub fn radical_row(curve: &StackyCurveP1, local: &LocalValues) -> RadicalRow {
    let t = local.point;
    let power = curve.lcm();
    let mut prod = BigUint::from(1u32);
    for (f, p) in local.factored.iter().zip(curve.points()) {
        let m = p.multiplicity;
        prod *= (f.r_m(m) * f.phi_m(m)).pow((power / m as u64) as u32);
    }
    let root = prod.nth_root(power as u32);
    debug_assert_eq!(root.pow(power as u32), prod);
    let (x, y) = (t.x().unsigned_abs(), t.y().unsigned_abs());
    let s = (t.x() + t.y()).unsigned_abs();
    let radical = radical_of(&[x.max(1), y.max(1), s.max(1)]);
    let holds = prod <= BigUint::from(radical).pow(power as u32);
    let log_ratio = (local.naive > 1).then(|| (radical as f64).ln() / (local.naive as f64).ln());
    RadicalRow {
        point: t,
        max: local.naive,
        product: root,
        radical,
        holds,
        log_ratio,
    }
}

/// Rows for every non-stacky point with `max <= b`.
pub fn radical_inequality_rows(curve: &StackyCurveP1, b: u64) -> Result<Vec<RadicalRow>> {
    check_zero_inf_minus_one(curve)?;
    Ok(box_points(curve, b)?
        .par_iter()
        .map(|l| radical_row(curve, l))
        .collect())
}

/// Checks `H_K H_{-K} <= rad(xy(x+y))` at every point with `max <= b` and
/// records how close `rad(xy(x+y))` comes to `max` on the log scale.
pub fn radical_inequality_report(curve: &StackyCurveP1, b: u64, epsilon: f64) -> Result<RadicalReport> {
    let rows = radical_inequality_rows(curve, b)?;
    let mut report = RadicalReport {
        curve: curve.to_string(),
        bound: b,
        epsilon,
        points: rows.len() as u64,
        violations: 0,
        min_log_ratio: None,
        min_log_ratio_point: None,
        below_one_plus_epsilon: 0,
    };
    for r in &rows {
        if !r.holds {
            report.violations += 1;
        }
        if let Some(q) = r.log_ratio {
            if report.min_log_ratio.map_or(true, |m| q < m) {
                report.min_log_ratio = Some(q);
                report.min_log_ratio_point = Some(r.point);
            }
            if q * (1.0 + epsilon) < 1.0 {
                report.below_one_plus_epsilon += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct NorthcottRow {
    #[serde(serialize_with = "ser_display")]
    pub delta: Rational64,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub count: u64,
    /// `delta > 0` and `B^delta >= C`: no point outside the box qualifies.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NorthcottTable {
    pub curve: String,
    #[serde(serialize_with = "ser_display")]
    pub euler_char: Rational64,
    pub rows: Vec<NorthcottRow>,
}

impl NorthcottTable {
    /// For every `delta`, all exhaustive rows carry the same count.
    pub fn stabilized(&self) -> bool {
        self.rows.iter().all(|r| {
            !r.exhaustive
                || self
                    .rows
                    .iter()
                    .filter(|s| s.delta == r.delta && s.exhaustive)
                    .all(|s| s.count == r.count)
        })
    }
}

/// Counts points with `H^delta <= C` and `max <= B` for every pair in the
/// two ladders. The perturbed height is
/// `prod phi_{m_i}(lambda_i)^{1/m_i} max^delta`, compared at its own power.
pub fn northcott_gamma_probe(
    curve: &StackyCurveP1,
    deltas: &[Rational64],
    c: u64,
    bs: &[u64],
) -> Result<NorthcottTable> {
    let b_max = bs.iter().copied().max().unwrap_or(0);
    let points = box_points(curve, b_max)?;
    let bound = ExactHeight::from_integer(1, c.into());
    let mut rows = Vec::new();
    for &delta in deltas {
        let mut maxes: Vec<u64> = points
            .par_iter()
            .filter(|l| curve.perturbed_height_local(l, delta) <= bound)
            .map(|l| l.naive)
            .collect();
        maxes.sort_unstable();
        for &b in bs {
            rows.push(NorthcottRow {
                delta,
                c,
                b,
                count: maxes.partition_point(|&m| m <= b) as u64,
                exhaustive: delta.is_positive() && exhaustive_box(delta, c, b),
            });
        }
    }
    Ok(NorthcottTable {
        curve: curve.to_string(),
        euler_char: curve.euler_char(),
        rows,
    })
}

/// Observational count of points with `H_{-K} <= T` and `max <= B` on a
/// curve with `n >= 5` points of multiplicity two, set against `T^{1/(n-3)}`
/// and `T^{1/(n-4)}`.
#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub count: u64,
    pub ratio_n3: f64,
    pub ratio_n4: f64,
}

pub fn conditional_count_table(curve: &StackyCurveP1, ts: &[u64], b: u64) -> Result<Vec<CountRow>> {
    let n = curve.len();
    if n < 5 || curve.multiplicities().iter().any(|&m| m != 2) {
        return Err(Error::Precondition(format!(
            "need at least five points of multiplicity 2, got {curve}"
        )));
    }
    let points = box_points(curve, b)?;
    let heights: Vec<ExactHeight> = points
        .par_iter()
        .map(|l| curve.anticanonical_height_local(l))
        .collect();
    Ok(ts
        .iter()
        .map(|&t| {
            let bound = ExactHeight::from_integer(1, t.into());
            let count = heights.iter().filter(|h| **h <= bound).count() as u64;
            let tf = t as f64;
            CountRow {
                t,
                b,
                count,
                ratio_n3: count as f64 / tf.powf(1.0 / (n as f64 - 3.0)),
                ratio_n4: count as f64 / tf.powf(1.0 / (n as f64 - 4.0)),
            }
        })
        .collect())
}
