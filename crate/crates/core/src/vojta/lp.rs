//! The primal/dual pair bounding the stacky part of `H_{-K}` from below.
//!
//! Columns are `y_{i,j}` for stacky point `i` and `j = 1..=m_i`, block by
//! block. Rows are `a_0 = (1, ..., 1)` and `a_i = -j` on block `i`. In the
//! symbolic instance every right-hand side is a rational multiple of `log B`;
//! a point instance replaces them with logarithms of concrete integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factor_u64, power_free_decompose, PowerFreeDecomposition};
use crate::curve::{ProjPoint, StackyCurveP1};
use crate::error::{Error, Result};
use crate::report::{ser_display, ser_display_vec};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LPInstance {
    pub m: Vec<u32>,
    #[serde(serialize_with = "ser_display")]
    pub epsilon: BigRational,
    /// `c_{i,j} = (m_i - j) / m_i`.
    #[serde(serialize_with = "ser_display_vec")]
    pub c: Vec<BigRational>,
    /// `n + 1` rows of length `sum m_i`.
    #[serde(skip)]
    pub a: Vec<Vec<BigRational>>,
    /// Right-hand side in units of `log B`: `n - 2 - epsilon`, then `-1`.
    #[serde(serialize_with = "ser_display_vec")]
    pub b: Vec<BigRational>,
}

impl LPInstance {
    pub fn columns(&self) -> usize {
        self.c.len()
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    /// Column index of `y_{i,j}` (`j` from 1).
    pub fn column(&self, i: usize, j: u32) -> usize {
        self.m[..i].iter().map(|&m| m as usize).sum::<usize>() + j as usize - 1
    }

    /// `x = [1, 1/m_1, ..., 1/m_n]`.
    pub fn canonical_dual(&self) -> Vec<BigRational> {
        std::iter::once(BigRational::one())
            .chain(self.m.iter().map(|&m| q(1, m as i64)))
            .collect()
    }

    /// `-chi = (n - 2) - sum 1/m_i`.
    pub fn minus_chi(&self) -> BigRational {
        let n = self.m.len() as i64;
        self.m
            .iter()
            .fold(BigRational::from_integer((n - 2).into()), |acc, &m| acc - q(1, m as i64))
    }
}

pub fn lp_build(m: &[u32], epsilon: &BigRational) -> Result<LPInstance> {
    if m.is_empty() {
        return Err(Error::domain("empty multiplicity vector"));
    }
    if let Some(&bad) = m.iter().find(|&&v| v < 2) {
        return Err(Error::domain(format!("multiplicity must be >= 2, got {bad}")));
    }
    if epsilon.is_negative() {
        return Err(Error::domain(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let n = m.len();
    let cols: usize = m.iter().map(|&v| v as usize).sum();
    let mut c = Vec::with_capacity(cols);
    let mut a = vec![vec![BigRational::zero(); cols]; n + 1];
    let mut k = 0;
    for (i, &mi) in m.iter().enumerate() {
        for j in 1..=mi {
            c.push(q((mi - j) as i64, mi as i64));
            a[0][k] = BigRational::one();
            a[i + 1][k] = BigRational::from_integer(BigInt::from(-(j as i64)));
            k += 1;
        }
    }
    let mut b = vec![BigRational::from_integer(BigInt::from(n as i64 - 2)) - epsilon];
    b.extend(std::iter::repeat(-BigRational::one()).take(n));
    Ok(LPInstance {
        m: m.to_vec(),
        epsilon: epsilon.clone(),
        c,
        a,
        b,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    pub feasible: bool,
    /// `A^T x = c` in every column.
    pub tight: bool,
    /// `b^T x` in units of `log B`.
    #[serde(serialize_with = "ser_display")]
    pub dual_value_coefficient: BigRational,
    /// `-chi - epsilon`, the value the coefficient should take.
    #[serde(serialize_with = "ser_display")]
    pub expected: BigRational,
    #[serde(serialize_with = "ser_display_vec")]
    pub x: Vec<BigRational>,
}

impl DualCheck {
    pub fn passes(&self) -> bool {
        self.feasible && self.tight && self.dual_value_coefficient == self.expected
    }
}

fn a_transpose_x(inst: &LPInstance, x: &[BigRational]) -> Vec<BigRational> {
    (0..inst.columns())
        .map(|k| {
            inst.a
                .iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (row, xr)| acc + &row[k] * xr)
        })
        .collect()
}

/// Checks the canonical dual vector against the instance.
pub fn dual_feasible_check(inst: &LPInstance) -> DualCheck {
    let x = inst.canonical_dual();
    let atx = a_transpose_x(inst, &x);
    let feasible = x.iter().all(|v| !v.is_negative()) && atx.iter().zip(&inst.c).all(|(l, r)| l <= r);
    let tight = atx == inst.c;
    let value = inst.b.iter().zip(&x).fold(BigRational::zero(), |acc, (b, x)| acc + b * x);
    DualCheck {
        feasible,
        tight,
        dual_value_coefficient: value,
        expected: inst.minus_chi() - &inst.epsilon,
        x,
    }
}

/// Scalars the duality check runs over: exact rationals for the symbolic
/// instance, `LogLinear` for point instances.
pub trait LpScalar: Clone {
    fn zero_scalar() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    fn exact_cmp(&self, other: &Self) -> Ordering;
}

impl LpScalar for BigRational {
    fn zero_scalar() -> Self {
        Zero::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
    fn exact_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// `sum_p q_p log p` over primes `p`, compared exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogLinear {
    terms: BTreeMap<u64, BigRational>,
}

impl LogLinear {
    /// `log n` for `n >= 1`.
    pub fn log(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("log of 0"));
        }
        let terms = factor_u64(n)
            .into_iter()
            .map(|(p, e)| (p, BigRational::from_integer(BigInt::from(e))))
            .collect();
        Ok(LogLinear { terms })
    }

    /// `log rad(prod n_k)` from the primes dividing any `n_k`.
    pub fn log_radical(ns: &[u64]) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for &n in ns {
            if n == 0 {
                return Err(Error::domain("radical of 0"));
            }
            for p in factor_u64(n).into_keys() {
                terms.insert(p, BigRational::one());
            }
        }
        Ok(LogLinear { terms })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.plus(&other.neg())
    }

    /// Sign decided by comparing `prod_{q_p > 0} p^{D q_p}` with
    /// `prod_{q_p < 0} p^{-D q_p}`, `D` the common denominator.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        let d = self.terms.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let (mut pos, mut neg) = (BigUint::one(), BigUint::one());
        for (&p, v) in &self.terms {
            let e = (v * BigRational::from_integer(d.clone())).to_integer();
            let k = e.abs().to_u32().expect("log exponent fits u32");
            let f = BigUint::from(p).pow(k);
            if e.is_positive() {
                pos *= f;
            } else {
                neg *= f;
            }
        }
        pos.cmp(&neg)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, v)| v.to_f64().unwrap_or(f64::NAN) * (p as f64).ln())
            .sum()
    }
}

impl LpScalar for LogLinear {
    fn zero_scalar() -> Self {
        LogLinear::default()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (p, v) in &other.terms {
            let e = terms.entry(*p).or_insert_with(BigRational::zero);
            *e += v;
            if e.is_zero() {
                terms.remove(p);
            }
        }
        LogLinear { terms }
    }
    fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return LogLinear::default();
        }
        LogLinear {
            terms: self.terms.iter().map(|(&p, v)| (p, v * r)).collect(),
        }
    }
    fn exact_cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

impl fmt::Display for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, v)| format!("{v}*log({p})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn dot<S: LpScalar>(coeffs: &[BigRational], v: &[S]) -> S {
    coeffs.iter().zip(v).fold(S::zero_scalar(), |acc, (c, s)| acc.plus(&s.scale(c)))
}

/// Weak duality `c^T y >= b^T x` with an explicit right-hand side `b`.
///
/// Fails with a precondition error unless `y >= 0`, `A y >= b`, `x >= 0`
/// and `A^T x <= c` all hold exactly.
pub fn weak_duality_check_with<S: LpScalar>(
    inst: &LPInstance,
    b: &[S],
    y: &[S],
    x: &[BigRational],
) -> Result<bool> {
    if y.len() != inst.columns() || x.len() != inst.rows() || b.len() != inst.rows() {
        return Err(Error::Precondition(format!(
            "dimension mismatch: y {} (want {}), x {} and b {} (want {})",
            y.len(),
            inst.columns(),
            x.len(),
            b.len(),
            inst.rows()
        )));
    }
    if y.iter().any(|v| v.exact_cmp(&S::zero_scalar()) == Ordering::Less) {
        return Err(Error::Precondition("y has a negative entry".into()));
    }
    for (r, (row, br)) in inst.a.iter().zip(b).enumerate() {
        if dot(row, y).exact_cmp(br) == Ordering::Less {
            return Err(Error::Precondition(format!("y violates primal row {r}")));
        }
    }
    if x.iter().any(|v| v.is_negative()) {
        return Err(Error::Precondition("x has a negative entry".into()));
    }
    if a_transpose_x(inst, x).iter().zip(&inst.c).any(|(l, r)| l > r) {
        return Err(Error::Precondition("x violates a dual constraint".into()));
    }
    let primal = dot(&inst.c, y);
    let dual = x.iter().zip(b).fold(S::zero_scalar(), |acc, (xr, br)| acc.plus(&br.scale(xr)));
    Ok(primal.exact_cmp(&dual) != Ordering::Less)
}

/// Weak duality on the symbolic instance, `y` in units of `log B`.
pub fn weak_duality_check(inst: &LPInstance, y: &[BigRational], x: &[BigRational]) -> Result<bool> {
    weak_duality_check_with(inst, &inst.b, y, x)
}

/// The LP instantiated at one rational point.
#[derive(Debug, Clone)]
pub struct PointLp {
    pub instance: LPInstance,
    pub point: ProjPoint,
    pub decompositions: Vec<PowerFreeDecomposition>,
    /// `y_{i,j} = log z_{i,j}`.
    pub y: Vec<LogLinear>,
    /// `log rad(prod l_i)`, then `-log((|alpha_i| + |beta_i|) max)`.
    pub b: Vec<LogLinear>,
}

impl PointLp {
    pub fn z_vectors(&self) -> Vec<Vec<u64>> {
        self.decompositions.iter().map(|d| d.parts.clone()).collect()
    }

    pub fn weak_duality(&self) -> Result<bool> {
        weak_duality_check_with(&self.instance, &self.b, &self.y, &self.instance.canonical_dual())
    }

    /// `c^T y`, the log of the stacky part of `H_{-K}`.
    pub fn primal_value(&self) -> LogLinear {
        dot(&self.instance.c, &self.y)
    }

    pub fn dual_value(&self) -> LogLinear {
        let x = self.instance.canonical_dual();
        x.iter().zip(&self.b).fold(LogLinear::zero_scalar(), |acc, (xr, br)| acc.plus(&br.scale(xr)))
    }

    /// `epsilon` for which row 0 reads `sum y >= (n - 2 - epsilon) log max`.
    pub fn effective_epsilon(&self) -> Option<f64> {
        let lb = (self.point.naive_height() as f64).ln();
        (lb > 0.0).then(|| (self.instance.m.len() as f64 - 2.0) - self.b[0].to_f64() / lb)
    }
}

/// Power-free decompositions of every `lambda_i(t)` and the LP instantiated
/// with the point's own constants.
pub fn point_exponent_vector(curve: &StackyCurveP1, t: &ProjPoint) -> Result<PointLp> {
    if curve.is_empty() {
        return Err(Error::domain("curve has no stacky points"));
    }
    let local = curve.local_values(t)?;
    let instance = lp_build(&curve.multiplicities(), &BigRational::zero())?;
    let mut decompositions = Vec::with_capacity(curve.len());
    let mut y = Vec::with_capacity(instance.columns());
    let mut b = vec![LogLinear::log_radical(&local.lambdas)?];
    for (p, &l) in curve.points().iter().zip(&local.lambdas) {
        let l = i64::try_from(l).map_err(|_| Error::Overflow(format!("lambda {l}")))?;
        let d = power_free_decompose(l, p.multiplicity)?;
        for &z in &d.parts {
            y.push(LogLinear::log(z)?);
        }
        decompositions.push(d);
        let bound = p
            .point
            .l1_norm()
            .checked_mul(local.naive)
            .ok_or_else(|| Error::Overflow("row constant".into()))?;
        b.push(LogLinear::log(bound)?.neg());
    }
    Ok(PointLp {
        instance,
        point: *t,
        decompositions,
        y,
        b,
    })
}
