//! Stacky curves over P^1/Q, line bundles on them, and exact height
//! evaluation.
//!
//! A height `H` is stored as the exact rational `H^L` where `L` is the lcm of
//! the multiplicities (extended by the denominator of `delta` for perturbed
//! heights). No floating point enters any comparison.

mod height;
mod mobius;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub use height::{ExactHeight, LocalValues};
pub use mobius::{transport_bounds, Mobius, QuotientCheck, TransportEntry, TransportReport};

use crate::error::{Error, Result};

/// A point of P^1(Q) in canonical form: `gcd(x, y) = 1` and `y > 0`, or
/// `[1:0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    x: i64,
    y: i64,
}

impl ProjPoint {
    pub const INFINITY: ProjPoint = ProjPoint { x: 1, y: 0 };

    pub fn new(x: i64, y: i64) -> Result<Self> {
        Self::from_i128(x as i128, y as i128)
    }

    /// Normalizes a pair of wide integers, failing if the reduced
    /// coordinates do not fit in `i64`.
    pub fn from_i128(x: i128, y: i128) -> Result<Self> {
        if x == 0 && y == 0 {
            return Err(Error::domain("[0:0] is not a point of P^1"));
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / g, y / g);
        if y < 0 || (y == 0 && x < 0) {
            x = -x;
            y = -y;
        }
        let conv = |v: i128| {
            i64::try_from(v).map_err(|_| Error::Overflow(format!("coordinate {v} exceeds i64")))
        };
        Ok(ProjPoint {
            x: conv(x)?,
            y: conv(y)?,
        })
    }

    /// Builds a point from coordinates already known to be canonical.
    #[inline]
    pub(crate) fn from_canonical(x: i64, y: i64) -> Self {
        debug_assert!(x.gcd(&y) == 1 && (y > 0 || (y == 0 && x == 1)));
        ProjPoint { x, y }
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    /// Naive Weil height `max(|x|, |y|)`.
    pub fn naive_height(&self) -> u64 {
        self.x.unsigned_abs().max(self.y.unsigned_abs())
    }

    /// `|x| + |y|`, the triangle-inequality constant of the linear form
    /// attached to this point.
    pub fn l1_norm(&self) -> u64 {
        self.x.unsigned_abs() + self.y.unsigned_abs()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.y {
            0 => write!(f, "inf"),
            1 => write!(f, "{}", self.x),
            y => write!(f, "{}/{}", self.x, y),
        }
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Accepts `inf`, an integer `a`, or a fraction `a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(ProjPoint::INFINITY);
        }
        let bad = || Error::parse(format!("invalid point `{s}`"));
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let a: i64 = a.parse().map_err(|_| bad())?;
        let b: i64 = b.parse().map_err(|_| bad())?;
        ProjPoint::new(a, b)
    }
}

/// Exponential intersection number `lambda(P, t) = |alpha*y - beta*x|` for
/// `P = [alpha:beta]`, `t = [x:y]`.
pub fn lambda(p: &ProjPoint, t: &ProjPoint) -> Result<u64> {
    let v = (p.x as i128 * t.y as i128 - p.y as i128 * t.x as i128).unsigned_abs();
    if v == 0 {
        return Err(Error::domain(format!(
            "height is undefined at the stacky point {t}"
        )));
    }
    u64::try_from(v).map_err(|_| Error::Overflow(format!("lambda({p}, {t}) = {v}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackyPoint {
    pub point: ProjPoint,
    pub multiplicity: u32,
}

impl StackyPoint {
    pub fn new(point: ProjPoint, multiplicity: u32) -> Result<Self> {
        if multiplicity < 2 {
            return Err(Error::domain(format!(
                "stacky multiplicity must be >= 2, got {multiplicity}"
            )));
        }
        Ok(StackyPoint {
            point,
            multiplicity,
        })
    }
}

impl fmt::Display for StackyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.point, self.multiplicity)
    }
}

/// P^1 over Q with finitely many distinct stacky points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackyCurveP1 {
    points: Vec<StackyPoint>,
    lcm: u64,
}

impl StackyCurveP1 {
    pub fn new(points: Vec<StackyPoint>) -> Result<Self> {
        for (i, a) in points.iter().enumerate() {
            if a.multiplicity < 2 {
                return Err(Error::domain(format!(
                    "stacky multiplicity must be >= 2 at {}",
                    a.point
                )));
            }
            if points[..i].iter().any(|b| b.point == a.point) {
                return Err(Error::domain(format!("repeated stacky point {}", a.point)));
            }
        }
        let lcm = points
            .iter()
            .fold(1u64, |acc, p| acc.lcm(&(p.multiplicity as u64)));
        Ok(StackyCurveP1 { points, lcm })
    }

    /// Convenience constructor from `(point, m)` pairs.
    pub fn from_pairs(pairs: &[(ProjPoint, u32)]) -> Result<Self> {
        let points = pairs
            .iter()
            .map(|&(p, m)| StackyPoint::new(p, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    /// `P^1 : (0, m1), (inf, m2), (-1, m3)`, the curve behind the counting
    /// experiments; its linear forms are `|x|`, `|y|`, `|x + y|`.
    pub fn standard(m1: u32, m2: u32, m3: u32) -> Result<Self> {
        Self::from_pairs(&[
            (ProjPoint::from_canonical(0, 1), m1),
            (ProjPoint::INFINITY, m2),
            (ProjPoint::from_canonical(-1, 1), m3),
        ])
    }

    pub fn points(&self) -> &[StackyPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.points.iter().map(|p| p.multiplicity).collect()
    }

    /// lcm of the multiplicities (1 for the bare coarse space).
    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// `2 - sum (1 - 1/m_i)`.
    pub fn euler_char(&self) -> Rational64 {
        euler_char_of(&self.multiplicities())
    }

    pub fn is_stacky_point(&self, t: &ProjPoint) -> bool {
        self.points.iter().any(|p| p.point == *t)
    }

    pub fn trivial_bundle(&self) -> LineBundle {
        LineBundle {
            coarse_degree: 0,
            exponents: vec![0; self.len()],
        }
    }

    /// `-K`: every stacky exponent 1, coarse degree chosen so that the total
    /// degree equals the Euler characteristic.
    pub fn anticanonical_bundle(&self) -> LineBundle {
        LineBundle {
            coarse_degree: 2 - self.len() as i64,
            exponents: vec![1; self.len()],
        }
    }

    /// `K`, the inverse of [`Self::anticanonical_bundle`].
    pub fn canonical_bundle(&self) -> LineBundle {
        self.anticanonical_bundle().tensor_power(self, -1)
    }

    /// Totally ramified canonical cover: keeps only the listed stacky points,
    /// in the given order.
    pub fn canonical_cover_reduce(&self, keep: &[usize]) -> Result<Self> {
        let mut points = Vec::with_capacity(keep.len());
        for &i in keep {
            let p = self.points.get(i).ok_or_else(|| {
                Error::domain(format!("index {i} out of range for {} points", self.len()))
            })?;
            points.push(*p);
        }
        Self::new(points)
    }
}

impl fmt::Display for StackyCurveP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", items.join(","))
    }
}

impl FromStr for StackyCurveP1 {
    type Err = Error;

    /// Parses `alpha/beta:m` items separated by commas, e.g. `0:2,inf:2,-1:2`.
    /// The empty string is the bare coarse space.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::new(Vec::new());
        }
        let mut points = Vec::new();
        for item in s.split(',') {
            let (coord, m) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(format!("expected `point:m`, got `{item}`")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("invalid multiplicity in `{item}`")))?;
            points.push(StackyPoint::new(coord.parse()?, m)?);
        }
        Self::new(points)
    }
}

/// `2 - sum (1 - 1/m_i)` for a multiplicity vector.
pub fn euler_char_of(ms: &[u32]) -> Rational64 {
    ms.iter().fold(Rational64::from_integer(2), |acc, &m| {
        acc - (Rational64::from_integer(1) - Rational64::new(1, m as i64))
    })
}

/// `pi^* O(d) (x) prod L_{P_i}^{d_i}` with `0 <= d_i < m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundle {
    coarse_degree: i64,
    exponents: Vec<u32>,
}

impl LineBundle {
    pub fn new(curve: &StackyCurveP1, coarse_degree: i64, exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() != curve.len() {
            return Err(Error::domain(format!(
                "bundle has {} stacky exponents, curve has {} points",
                exponents.len(),
                curve.len()
            )));
        }
        for (d, p) in exponents.iter().zip(curve.points()) {
            if *d >= p.multiplicity {
                return Err(Error::domain(format!(
                    "stacky exponent {d} not in 0..{} at {}",
                    p.multiplicity, p.point
                )));
            }
        }
        Ok(LineBundle {
            coarse_degree,
            exponents,
        })
    }

    /// Parses `d;d_1,...,d_r` against `curve`.
    pub fn parse(s: &str, curve: &StackyCurveP1) -> Result<Self> {
        let (d, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::parse(format!("expected `d;d_1,...,d_r`, got `{s}`")))?;
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("invalid coarse degree in `{s}`")))?;
        let rest = rest.trim();
        let exps = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|e| {
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::parse(format!("invalid stacky exponent `{e}`")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(curve, d, exps)
    }

    pub fn coarse_degree(&self) -> i64 {
        self.coarse_degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `d + sum d_i / m_i`.
    pub fn degree(&self, curve: &StackyCurveP1) -> Rational64 {
        self.exponents
            .iter()
            .zip(curve.points())
            .fold(Rational64::from_integer(self.coarse_degree), |acc, (&d, p)| {
                acc + Rational64::new(d as i64, p.multiplicity as i64)
            })
    }

    /// `L^{(x) n}` rewritten in normal form: stacky exponents become
    /// `n d_i mod m_i` and the carries move into the coarse degree.
    pub fn tensor_power(&self, curve: &StackyCurveP1, n: i64) -> LineBundle {
        let mut coarse = self.coarse_degree * n;
        let mut exponents = Vec::with_capacity(self.exponents.len());
        for (&d, p) in self.exponents.iter().zip(curve.points()) {
            let m = p.multiplicity as i64;
            let total = d as i64 * n;
            coarse += total.div_euclid(m);
            exponents.push(total.rem_euclid(m) as u32);
        }
        LineBundle {
            coarse_degree: coarse,
            exponents,
        }
    }

    pub fn dual(&self, curve: &StackyCurveP1) -> LineBundle {
        self.tensor_power(curve, -1)
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.exponents.iter().map(|d| d.to_string()).collect();
        write!(f, "{};{}", self.coarse_degree, items.join(","))
    }
}
