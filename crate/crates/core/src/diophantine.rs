//! Integral points, diagonal ternary forms and their local solubility.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, jacobi_u64, Factorization, SpfSieve};
use crate::curve::{lambda, ProjPoint, StackyCurveP1};
use crate::error::{Error, Result};

/// Default cap on the number of candidate pairs a bounded search may visit.
pub const SEARCH_CEILING: u128 = 1 << 32;

/// `phi_{m_i}(lambda(P_i, t)) = 1` at every stacky point.
pub fn is_integral_point(curve: &StackyCurveP1, t: &ProjPoint) -> Result<bool> {
    for p in curve.points() {
        let l = lambda(&p.point, t)?;
        if !Factorization::of_u64(l)?.phi_m(p.multiplicity).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A y1^2 + B y2^2 + C y3^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryDiagonalForm {
    pub coeffs: [i64; 3],
}

impl TernaryDiagonalForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::domain(format!("degenerate form ({a}, {b}, {c})")));
        }
        Ok(TernaryDiagonalForm { coeffs: [a, b, c] })
    }

    pub fn eval(&self, y: &[i128; 3]) -> i128 {
        (0..3).map(|i| self.coeffs[i] as i128 * y[i] * y[i]).sum()
    }

    /// The form with every coefficient negated when all three are negative.
    pub fn sign_normalized(&self) -> Self {
        if self.coeffs.iter().all(|&c| c < 0) {
            TernaryDiagonalForm {
                coeffs: self.coeffs.map(|c| -c),
            }
        } else {
            *self
        }
    }

    pub fn is_definite(&self) -> bool {
        self.coeffs.iter().all(|&c| c > 0) || self.coeffs.iter().all(|&c| c < 0)
    }

    /// Square-free, pairwise coprime coefficients.
    pub fn is_reduced(&self) -> bool {
        let [a, b, c] = self.coeffs.map(|v| v.unsigned_abs());
        let sqf = |n: u64| factor_u64(n).values().all(|&e| e == 1);
        sqf(a) && sqf(b) && sqf(c) && a.gcd(&b) == 1 && a.gcd(&c) == 1 && b.gcd(&c) == 1
    }

    /// Square-free, pairwise coprime equivalent form with the steps taken.
    pub fn reduce(&self) -> Result<Reduction> {
        let mut coeffs = self.coeffs.map(|c| c as i128);
        let mut scale = [Ratio::<i128>::one(); 3];
        let mut steps = Vec::new();
        loop {
            let mut changed = false;
            for i in 0..3 {
                let f = factor_u64(
                    u64::try_from(coeffs[i].unsigned_abs())
                        .map_err(|_| Error::Overflow(format!("coefficient {}", coeffs[i])))?,
                );
                let k: i128 = f
                    .iter()
                    .map(|(&p, &e)| (p as i128).pow(e / 2))
                    .product();
                if k > 1 {
                    coeffs[i] /= k * k;
                    scale[i] /= k;
                    steps.push(ReductionStep::Square { index: i, root: k as u64 });
                    changed = true;
                }
            }
            for (i, j, l) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                let g = coeffs[i].gcd(&coeffs[j]);
                if g > 1 {
                    coeffs[i] /= g;
                    coeffs[j] /= g;
                    coeffs[l] = coeffs[l]
                        .checked_mul(g)
                        .ok_or_else(|| Error::Overflow("form reduction".into()))?;
                    scale[i] /= g;
                    scale[j] /= g;
                    steps.push(ReductionStep::Common {
                        pair: [i, j],
                        factor: g as u64,
                    });
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let conv = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow(format!("{v}")));
        let reduced = TernaryDiagonalForm::new(conv(coeffs[0])?, conv(coeffs[1])?, conv(coeffs[2])?)?;
        Ok(Reduction {
            original: *self,
            reduced,
            steps,
            scale,
        })
    }
}

impl fmt::Display for TernaryDiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coeffs;
        write!(f, "{a} y1^2 + {b} y2^2 + {c} y3^2")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionStep {
    /// `root^2` divided out of coefficient `index`; that variable absorbs `root`.
    Square { index: usize, root: u64 },
    /// Common `factor` of the two coefficients in `pair` moved onto the third,
    /// after multiplying the equation by it.
    Common { pair: [usize; 2], factor: u64 },
}

/// Original variables are `y_i = scale_i * Y_i` in terms of reduced ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub original: TernaryDiagonalForm,
    pub reduced: TernaryDiagonalForm,
    pub steps: Vec<ReductionStep>,
    scale: [Ratio<i128>; 3],
}

impl Reduction {
    /// Maps a zero of the reduced form to a primitive zero of the original.
    pub fn lift(&self, w: &[i128; 3]) -> [i128; 3] {
        let v: Vec<Ratio<i128>> = (0..3).map(|i| self.scale[i] * w[i]).collect();
        let den = v.iter().fold(1i128, |acc, r| acc.lcm(r.denom()));
        let mut out = [0i128; 3];
        for i in 0..3 {
            out[i] = (v[i] * den).to_integer();
        }
        primitive(out)
    }
}

fn primitive(mut v: [i128; 3]) -> [i128; 3] {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

/// Quadratic-residue condition at every odd prime of `modulus`; the prime 2
/// imposes nothing since every integer is a square mod 2.
fn residue_mod_squarefree(n: i128, modulus: u64) -> bool {
    factor_u64(modulus).keys().filter(|&&p| p != 2).all(|&p| {
        let r = n.rem_euclid(p as i128) as u64;
        r != 0 && jacobi_u64(r, p) == 1
    })
}

/// Whether `A y1^2 + B y2^2 + C y3^2 = 0` has a nontrivial rational zero.
pub fn legendre_solvable(f: &TernaryDiagonalForm) -> Result<bool> {
    let r = f.reduce()?;
    if r.reduced.is_definite() {
        return Ok(false);
    }
    let [a, b, c] = r.reduced.coeffs.map(|v| v as i128);
    Ok(residue_mod_squarefree(-b * c, a.unsigned_abs() as u64)
        && residue_mod_squarefree(-a * c, b.unsigned_abs() as u64)
        && residue_mod_squarefree(-a * b, c.unsigned_abs() as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Primitive zero of the form that was searched.
    pub original: [i128; 3],
    /// The zero found for the reduced form, within the Holzer box.
    pub reduced: [i128; 3],
    pub reduced_form: TernaryDiagonalForm,
}

impl Witness {
    /// `|Y1| <= sqrt|BC|`, `|Y2| <= sqrt|AC|`, `|Y3| <= sqrt|AB|` on the
    /// reduced form.
    pub fn within_holzer_box(&self) -> bool {
        let [a, b, c] = self.reduced_form.coeffs.map(|v| v.unsigned_abs() as u128);
        let caps = [b * c, a * c, a * b];
        (0..3).all(|i| {
            let y = self.reduced[i].unsigned_abs();
            y * y <= caps[i]
        })
    }
}

/// Exhaustive search for a nontrivial zero of the reduced form inside the
/// Holzer box, mapped back to the original variables.
///
/// The search does not consult [`legendre_solvable`]; an empty box is
/// reported as `None`.
pub fn holzer_search(f: &TernaryDiagonalForm, ceiling: u128) -> Result<Option<Witness>> {
    let r = f.reduce()?;
    let coeffs = r.reduced.coeffs.map(|v| v as i128);
    let [a, b, c] = coeffs.map(|v| v.unsigned_abs());
    let bounds = [(b * c).sqrt(), (a * c).sqrt(), (a * b).sqrt()];
    // loop over the two variables with the smallest boxes, solve for the third
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&i| (bounds[i], i));
    let [i, j, k] = order;
    let needed = (bounds[i] + 1) * (bounds[j] + 1);
    if needed > ceiling {
        return Err(Error::BoundExceeded { needed, ceiling });
    }
    for u in 0..=bounds[i] as i128 {
        for v in 0..=bounds[j] as i128 {
            if u == 0 && v == 0 {
                continue;
            }
            let rest = coeffs[i] * u * u + coeffs[j] * v * v;
            if rest % coeffs[k] != 0 {
                continue;
            }
            let w2 = -rest / coeffs[k];
            if w2 < 0 {
                continue;
            }
            let w = w2.sqrt();
            if w * w != w2 || w.unsigned_abs() > bounds[k] {
                continue;
            }
            let mut y = [0i128; 3];
            y[i] = u;
            y[j] = v;
            y[k] = w;
            let y = primitive(y);
            return Ok(Some(Witness {
                original: r.lift(&y),
                reduced: y,
                reduced_form: r.reduced,
            }));
        }
    }
    Ok(None)
}

fn check_admissible(x: [u64; 3]) -> Result<()> {
    for (i, &v) in x.iter().enumerate() {
        if v == 0 || !factor_u64(v).values().all(|&e| e == 1) {
            return Err(Error::domain(format!("x{} = {v} is not square-free and positive", i + 1)));
        }
    }
    if x[0].gcd(&x[1]) != 1 || x[0].gcd(&x[2]) != 1 || x[1].gcd(&x[2]) != 1 {
        return Err(Error::domain(format!("{x:?} not pairwise coprime")));
    }
    Ok(())
}

/// `2^{-omega(x)} sum_{a | x, a odd} (n / a)`, which is 0 or 1.
fn averaged_jacobi(n: i128, x: u64) -> u8 {
    let primes: Vec<u64> = factor_u64(x).into_keys().filter(|&p| p != 2).collect();
    let mut sum: i64 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let a: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .product();
        sum += jacobi_u64(n.rem_euclid(a as i128) as u64, a) as i64;
    }
    let full = 1i64 << primes.len();
    debug_assert!(sum == 0 || sum == full);
    (sum == full) as u8
}

/// Indicator of local solubility of `x1 y1^2 + x2 y2^2 - x3 y3^2`, as the
/// product of three averaged Jacobi sums over odd divisors.
pub fn f_s_indicator(x1: u64, x2: u64, x3: u64) -> Result<u8> {
    check_admissible([x1, x2, x3])?;
    let (a, b, c) = (x1 as i128, x2 as i128, x3 as i128);
    Ok(averaged_jacobi(b * c, x1) * averaged_jacobi(a * c, x2) * averaged_jacobi(-a * b, x3))
}

/// `sum d(x1 x2 x3) / (x1 x2 x3) f_S(x1, x2, x3)` over admissible ordered
/// triples with `x1 x2 x3 <= X`, exactly.
pub fn s_x_sum(x: u64) -> Result<BigRational> {
    if x == 0 {
        return Err(Error::domain("X must be positive"));
    }
    let limit = u32::try_from(x).map_err(|_| Error::Overflow(format!("X = {x}")))?;
    let sieve = SpfSieve::new(limit);
    // weight(n) = d(n) * #{soluble splits of n}; the sum is sum weight(n) / n
    let weights: Vec<(u64, u64)> = (1..=limit)
        .into_par_iter()
        .filter_map(|n| {
            let f = sieve.factor(n);
            if f.iter().any(|&(_, e)| e > 1) {
                return None;
            }
            let primes: Vec<u64> = f.iter().map(|&(p, _)| p as u64).collect();
            let w = primes.len() as u32;
            let mut soluble = 0u64;
            for code in 0..3u64.pow(w) {
                let mut parts = [1u64; 3];
                let mut c = code;
                for &p in &primes {
                    parts[(c % 3) as usize] *= p;
                    c /= 3;
                }
                soluble += f_s_indicator(parts[0], parts[1], parts[2]).expect("admissible") as u64;
            }
            (soluble > 0).then_some((n as u64, soluble << w))
        })
        .collect();
    // common denominator: the product of all primes up to X
    let den: BigUint = (2..=limit)
        .filter(|&p| sieve.spf(p) == p)
        .map(BigUint::from)
        .product();
    let mut num = BigUint::zero();
    for (n, w) in weights {
        num += (&den / n) * w;
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Plain evaluation of the S(X) weight by triple loops, used as an oracle.
pub fn s_x_sum_naive(x: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for x1 in 1..=x {
        for x2 in 1..=x / x1 {
            for x3 in 1..=x / (x1 * x2) {
                if let Ok(1) = f_s_indicator(x1, x2, x3) {
                    let n = x1 * x2 * x3;
                    let d = Factorization::of_u64(n).expect("positive").divisor_count();
                    acc += BigRational::new(BigInt::from(d), BigInt::from(n));
                }
            }
        }
    }
    acc
}

/// Cofactor form `sum c_i y_i^2` of three points given as coordinate pairs
/// `[alpha_i : beta_i]`: with `ell_i(x, y) = alpha_i y - beta_i x` the
/// identity `sum c_i ell_i = 0` holds for `c = (v2 x v3, v3 x v1, v1 x v2)`,
/// `v_i = (-beta_i, alpha_i)`. Rescaling a representative by `-1` flips the
/// signs of two coefficients.
pub fn hasse_form(coords: [(i64, i64); 3]) -> Result<TernaryDiagonalForm> {
    let v = coords.map(|(a, b)| [-(b as i128), a as i128]);
    let c = cofactors_of(v)?;
    let conv = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow(format!("{v}")));
    Ok(TernaryDiagonalForm::new(conv(c[0])?, conv(c[1])?, conv(c[2])?)?.sign_normalized())
}

fn form_vector(p: &ProjPoint) -> [i128; 2] {
    [-(p.y() as i128), p.x() as i128]
}

fn cross(u: [i128; 2], w: [i128; 2]) -> i128 {
    u[0] * w[1] - u[1] * w[0]
}

fn cofactors_of(v: [[i128; 2]; 3]) -> Result<[i128; 3]> {
    let c = [cross(v[1], v[2]), cross(v[2], v[0]), cross(v[0], v[1])];
    if c.contains(&0) {
        return Err(Error::domain("the three points are not distinct"));
    }
    Ok(c)
}

fn cofactors(p: [ProjPoint; 3]) -> Result<[i128; 3]> {
    cofactors_of(p.map(|q| form_vector(&q)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseReport {
    pub form: [i64; 3],
    pub soluble: bool,
    pub witness: Option<[i128; 3]>,
    pub integral_point: Option<[i64; 2]>,
}

/// Sign patterns of `ell_i = s_i y_i^2` up to a global sign.
const SIGNS: [[i64; 3]; 4] = [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]];

/// Radius of the direction box used to walk the conic from a witness.
const CONIC_RADIUS: i128 = 12;

/// Decides whether the `(2,2,2)` curve has an integral point through the
/// conics `sum c_i s_i y_i^2 = 0`, one per sign pattern.
///
/// A conic zero gives a point with `ell_i = s_i k y_i^2` for a common
/// square-free `k`. The walk over the conic stops at the first zero with
/// `k = 1`; that point is checked with [`is_integral_point`].
pub fn hasse_integral_check(curve: &StackyCurveP1) -> Result<HasseReport> {
    if curve.len() != 3 || curve.multiplicities() != [2, 2, 2] {
        return Err(Error::domain("the Hasse check needs exactly three points of multiplicity 2"));
    }
    let pts = [0, 1, 2].map(|i| curve.points()[i].point);
    let c = cofactors(pts)?;
    let mut first_soluble: Option<(TernaryDiagonalForm, [i128; 3])> = None;
    for s in SIGNS {
        let form = signed_form(c, s)?;
        if !legendre_solvable(&form)? {
            continue;
        }
        let Some(w) = holzer_search(&form, SEARCH_CEILING)? else {
            continue;
        };
        first_soluble.get_or_insert((form, w.original));
        for y in conic_walk(&form, w.original) {
            if let Some(t) = reconstruct(&pts, s, &y)? {
                if is_integral_point(curve, &t)? {
                    return Ok(HasseReport {
                        form: form.coeffs,
                        soluble: true,
                        witness: Some(y),
                        integral_point: Some([t.x(), t.y()]),
                    });
                }
            }
        }
    }
    Ok(match first_soluble {
        Some((form, w)) => HasseReport {
            form: form.coeffs,
            soluble: true,
            witness: Some(w),
            integral_point: None,
        },
        None => HasseReport {
            form: hasse_form(pts.map(|p| (p.x(), p.y())))?.coeffs,
            soluble: false,
            witness: None,
            integral_point: None,
        },
    })
}

fn signed_form(c: [i128; 3], s: [i64; 3]) -> Result<TernaryDiagonalForm> {
    let conv = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow(format!("{v}")));
    TernaryDiagonalForm::new(
        conv(c[0] * s[0] as i128)?,
        conv(c[1] * s[1] as i128)?,
        conv(c[2] * s[2] as i128)?,
    )
}

/// The witness, then the second intersection of the conic with the line
/// through it in each direction of a small box, in a fixed order.
fn conic_walk(form: &TernaryDiagonalForm, w: [i128; 3]) -> impl Iterator<Item = [i128; 3]> + '_ {
    let r = CONIC_RADIUS;
    let dirs = (-r..=r).flat_map(move |a| (-r..=r).flat_map(move |b| (0..=r).map(move |c| [a, b, c])));
    std::iter::once(w).chain(dirs.filter_map(move |d| {
        let q = form.eval(&d);
        let bilinear: i128 = (0..3).map(|i| form.coeffs[i] as i128 * w[i] * d[i]).sum();
        if q == 0 {
            return None;
        }
        let p = [0, 1, 2].map(|i| q.checked_mul(w[i])?.checked_sub(2 * bilinear * d[i]));
        let p = [p[0]?, p[1]?, p[2]?];
        (p != [0, 0, 0]).then(|| primitive(p))
    }))
}

/// The point with `ell_1 = s_1 y_1^2`, `ell_2 = s_2 y_2^2`, or `None` when a
/// linear form vanishes there.
fn reconstruct(pts: &[ProjPoint; 3], s: [i64; 3], y: &[i128; 3]) -> Result<Option<ProjPoint>> {
    if y.contains(&0) {
        return Ok(None);
    }
    let v = pts.map(|p| form_vector(&p));
    let r1 = s[0] as i128 * y[0] * y[0];
    let r2 = s[1] as i128 * y[1] * y[1];
    // Cramer on [v1; v2] (x, y)^T = (r1, r2)^T, scaled by the determinant
    let x = r1 * v[1][1] - r2 * v[0][1];
    let yy = v[0][0] * r2 - v[1][0] * r1;
    match ProjPoint::from_i128(x, yy) {
        Ok(t) if pts.iter().all(|p| lambda(p, &t).is_ok()) => Ok(Some(t)),
        Ok(_) => Ok(None),
        Err(Error::Overflow(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Every integral point with `max(|x|, |y|) <= b` on a three-point `(2,2,2)`
/// curve, found by running `ell_1 = +-a^2`, `ell_2 = +-b^2` over the
/// admissible squares and solving for the point.
pub fn integral_box_search(curve: &StackyCurveP1, b: u64) -> Result<Vec<ProjPoint>> {
    if curve.len() != 3 || curve.multiplicities() != [2, 2, 2] {
        return Err(Error::domain("box search needs exactly three points of multiplicity 2"));
    }
    let pts = [0, 1, 2].map(|i| curve.points()[i].point);
    let v = pts.map(|p| form_vector(&p));
    let det = cross(v[0], v[1]);
    let cap = |p: &ProjPoint| (p.l1_norm() as u128 * b as u128).sqrt() as i128;
    let (c1, c2) = (cap(&pts[0]), cap(&pts[1]));
    let mut out: Vec<ProjPoint> = (1..=c1)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut found = Vec::new();
            for bb in 1..=c2 {
                for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let r1 = s1 * a * a;
                    let r2 = s2 * bb * bb;
                    let xn = r1 * v[1][1] - r2 * v[0][1];
                    let yn = v[0][0] * r2 - v[1][0] * r1;
                    if xn % det != 0 || yn % det != 0 {
                        continue;
                    }
                    let (x, y) = (xn / det, yn / det);
                    if x.gcd(&y) != 1 || x.unsigned_abs().max(y.unsigned_abs()) > b as u128 {
                        continue;
                    }
                    let Ok(t) = ProjPoint::from_i128(x, y) else { continue };
                    if matches!(is_integral_point(curve, &t), Ok(true)) {
                        found.push(t);
                    }
                }
            }
            found.into_iter()
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Fate of one sign pattern `ell_i = s_i y_i^2` for primitive `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    pub signs: [i64; 3],
    /// Some real `(x, y)` has `sign(ell_i) = s_i` for all `i`.
    pub real: bool,
    /// Smallest prime power modulus with no primitive residue pair making
    /// every `s_i ell_i` a square.
    pub obstructed_mod: Option<u64>,
}

impl SignPattern {
    pub fn ruled_out(&self) -> bool {
        !self.real || self.obstructed_mod.is_some()
    }
}

fn local_moduli(c: &[i128; 3]) -> Vec<u64> {
    let mut primes: Vec<u64> = (2..50u64).filter(|&p| crate::arith::is_prime(p)).collect();
    for v in c {
        primes.extend(factor_u64(v.unsigned_abs() as u64).into_keys());
    }
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|p| {
            let v: u32 = c.iter().map(|x| factor_u64(x.unsigned_abs() as u64).get(&p).copied().unwrap_or(0)).sum();
            let mut q = p.pow(if p == 2 { 3 } else { 1 });
            for _ in 0..v {
                if q * p > 1024 {
                    break;
                }
                q *= p;
            }
            (p, q)
        })
        .filter(|&(_, q)| q <= 1024)
        .map(|(_, q)| q)
        .collect()
}

/// Sign patterns of an integral point on a `(2,2,2)` curve, each checked
/// over the reals and modulo small prime powers. If every pattern is ruled
/// out, the curve has no integral point at all.
pub fn integral_sign_patterns(curve: &StackyCurveP1) -> Result<Vec<SignPattern>> {
    if curve.len() != 3 || curve.multiplicities() != [2, 2, 2] {
        return Err(Error::domain("sign patterns need exactly three points of multiplicity 2"));
    }
    let pts = [0, 1, 2].map(|i| curve.points()[i].point);
    let v = pts.map(|p| form_vector(&p));
    let c = cofactors(pts)?;
    let all: Vec<[i64; 3]> = (0..8)
        .map(|k| [0, 1, 2].map(|i| if k >> i & 1 == 1 { -1 } else { 1 }))
        .collect();
    let eval = |s: &[i64; 3], x: f64, y: f64| {
        (0..3).all(|i| ((v[i][0] as f64 * x + v[i][1] as f64 * y) * s[i] as f64) > 0.0)
    };
    let mut angles: Vec<f64> = pts
        .iter()
        .flat_map(|p| {
            let a = (p.y() as f64).atan2(p.x() as f64);
            [a, a + std::f64::consts::PI]
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    let mids: Vec<f64> = (0..angles.len())
        .map(|i| {
            let next = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + 2.0 * std::f64::consts::PI };
            (angles[i] + next) / 2.0
        })
        .collect();
    let moduli = local_moduli(&c);
    Ok(all
        .into_iter()
        .map(|s| {
            let real = mids.iter().any(|&a| eval(&s, a.cos(), a.sin()));
            let obstructed_mod = moduli.iter().copied().find(|&q| {
                let qi = q as i128;
                let p = factor_u64(q).into_keys().next().expect("prime power");
                let mut square = vec![false; q as usize];
                for a in 0..q {
                    square[(a * a % q) as usize] = true;
                }
                !(0..qi).any(|x| {
                    (0..qi).any(|y| {
                        (x % p as i128 != 0 || y % p as i128 != 0)
                            && (0..3).all(|i| {
                                let l = s[i] as i128 * (v[i][0] * x + v[i][1] * y);
                                square[l.rem_euclid(qi) as usize]
                            })
                    })
                })
            });
            SignPattern {
                signs: s,
                real,
                obstructed_mod,
            }
        })
        .collect())
}

/// `d(n)` for `n <= limit` by divisor counting, as an independent check of
/// the multiplicative evaluation.
pub fn divisor_count_table(limit: u32) -> Vec<u64> {
    let mut d = vec![0u64; limit as usize + 1];
    for a in 1..=limit as usize {
        for m in (a..=limit as usize).step_by(a) {
            d[m] += 1;
        }
    }
    d
}

/// Decimal value of an exact sum, for reports.
pub fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_curves_are_locally_obstructed() {
        for desc in ["1/5:2,inf:2,-2/5:2", "1:2,-2/5:2,-6:2"] {
            let c: StackyCurveP1 = desc.parse().unwrap();
            assert!(hasse_integral_check(&c).unwrap().soluble);
            let pats = integral_sign_patterns(&c).unwrap();
            assert!(pats.iter().all(|p| p.ruled_out()), "{desc}: {pats:?}");
        }
        let c = StackyCurveP1::standard(2, 2, 2).unwrap();
        let pats = integral_sign_patterns(&c).unwrap();
        assert!(pats.iter().any(|p| !p.ruled_out()));
        // [9:16] has ell = (-9, 16, -25) up to sign conventions
        let t: ProjPoint = "9/16".parse().unwrap();
        assert!(is_integral_point(&c, &t).unwrap());
    }

    fn form(a: i64, b: i64, c: i64) -> TernaryDiagonalForm {
        TernaryDiagonalForm::new(a, b, c).unwrap()
    }

    #[test]
    fn integral_point_examples() {
        let c = StackyCurveP1::standard(2, 2, 2).unwrap();
        assert!(is_integral_point(&c, &"9/16".parse().unwrap()).unwrap());
        assert!(!is_integral_point(&c, &"3/4".parse().unwrap()).unwrap());
        assert!(is_integral_point(&c, &"0".parse().unwrap()).is_err());
        let single: StackyCurveP1 = "-1:3".parse().unwrap();
        // x + y = 27
        assert!(is_integral_point(&single, &"20/7".parse().unwrap()).unwrap());
    }

    #[test]
    fn cofactor_form_of_standard_points() {
        assert_eq!(hasse_form([(0, 1), (1, 0), (1, -1)]).unwrap().coeffs, [-1, 1, -1]);
        // the canonical representative [-1:1] of the third point flips two signs
        assert_eq!(hasse_form([(0, 1), (1, 0), (-1, 1)]).unwrap().coeffs, [1, -1, -1]);
        assert!(hasse_form([(0, 1), (1, 0), (0, 3)]).is_err());
        assert_eq!(form(-2, -3, -5).sign_normalized().coeffs, [2, 3, 5]);
    }

    #[test]
    fn cofactor_identity() {
        let p = ["2/3", "-5", "7/2"].map(|s| s.parse::<ProjPoint>().unwrap());
        let c = cofactors(p).unwrap();
        for (x, y) in [(1i128, 1i128), (4, -9), (13, 7)] {
            let s: i128 = (0..3)
                .map(|i| {
                    let v = form_vector(&p[i]);
                    c[i] * (v[0] * x + v[1] * y)
                })
                .sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn reduction_transcript() {
        let f = form(12, 18, -5);
        let r = f.reduce().unwrap();
        assert!(r.reduced.is_reduced());
        assert!(!r.steps.is_empty());
        let w = holzer_search(&f, SEARCH_CEILING).unwrap();
        if let Some(w) = w {
            assert_eq!(f.eval(&w.original), 0);
        }
    }

    #[test]
    fn legendre_examples() {
        assert!(legendre_solvable(&form(1, 1, -1)).unwrap());
        assert!(!legendre_solvable(&form(1, 1, 1)).unwrap());
        assert!(!legendre_solvable(&form(1, 1, -3)).unwrap());
        assert!(legendre_solvable(&form(3, 1, -1)).unwrap());
        // no small zero of y1^2 + y2^2 = 3 y3^2
        for a in 0..=100i128 {
            for b in 0..=100i128 {
                let s = a * a + b * b;
                if s % 3 == 0 && s > 0 {
                    let z = (s / 3).sqrt();
                    assert_ne!(3 * z * z, s);
                }
            }
        }
    }

    #[test]
    fn holzer_examples() {
        let w = holzer_search(&form(1, 1, -1), SEARCH_CEILING).unwrap().unwrap();
        assert_eq!(form(1, 1, -1).eval(&w.original), 0);
        assert!(w.within_holzer_box());
        assert!(holzer_search(&form(1, 1, 1), SEARCH_CEILING).unwrap().is_none());
        assert!(matches!(
            holzer_search(&form(1_000_003, 1_000_033, -1_000_037), 10),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn f_s_examples() {
        assert_eq!(f_s_indicator(1, 1, 1).unwrap(), 1);
        assert_eq!(f_s_indicator(3, 1, 1).unwrap(), 1);
        assert_eq!(form(3, 1, -1).eval(&[1, 1, 2]), 0);
        assert!(f_s_indicator(2, 2, 1).is_err());
        assert!(f_s_indicator(4, 1, 1).is_err());
    }

    #[test]
    fn s_x_small() {
        assert_eq!(s_x_sum(1).unwrap(), BigRational::one());
        for x in [2u64, 10, 30, 60] {
            assert_eq!(s_x_sum(x).unwrap(), s_x_sum_naive(x), "X={x}");
        }
    }

    #[test]
    fn divisor_table_matches_factorization() {
        let d = divisor_count_table(10_000);
        for n in 1..=10_000u64 {
            assert_eq!(d[n as usize], Factorization::of_u64(n).unwrap().divisor_count());
        }
    }

    #[test]
    fn standard_curve_is_soluble() {
        let c = StackyCurveP1::standard(2, 2, 2).unwrap();
        let r = hasse_integral_check(&c).unwrap();
        assert!(r.soluble);
        let [x, y] = r.integral_point.unwrap();
        let t = ProjPoint::new(x, y).unwrap();
        assert!(is_integral_point(&c, &t).unwrap());
    }

    #[test]
    fn permuted_points_same_verdict() {
        for desc in ["0:2,inf:2,3:2", "1:2,2:2,5:2", "-1/2:2,3:2,inf:2"] {
            let c: StackyCurveP1 = desc.parse().unwrap();
            let base = hasse_integral_check(&c).unwrap().soluble;
            let p = c.points();
            let perm = StackyCurveP1::new(vec![p[2], p[0], p[1]]).unwrap();
            assert_eq!(hasse_integral_check(&perm).unwrap().soluble, base, "{desc}");
        }
    }

    #[test]
    fn box_search_finds_pythagorean_points() {
        let c = StackyCurveP1::standard(2, 2, 2).unwrap();
        let found = integral_box_search(&c, 1000).unwrap();
        assert_eq!(found, crate::census::pythagorean_integral_points(1000));
    }
}
