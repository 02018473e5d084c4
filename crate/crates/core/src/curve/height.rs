use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive};

use super::{lambda, LineBundle, ProjPoint, StackyCurveP1};
use crate::arith::Factorization;
use crate::error::{Error, Result};

/// A height stored as the exact rational `H^L`. Equality and ordering
/// compare the heights themselves, whatever powers they are stored at.
#[derive(Debug, Clone)]
pub struct ExactHeight {
    lcm_power: u64,
    value: BigRational,
}

impl ExactHeight {
    pub fn new(lcm_power: u64, value: BigRational) -> Self {
        assert!(lcm_power > 0, "height power must be positive");
        ExactHeight { lcm_power, value }
    }

    pub fn from_integer(lcm_power: u64, value: BigUint) -> Self {
        Self::new(lcm_power, BigRational::from_integer(BigInt::from(value)))
    }

    /// `L`, the power the stored value is raised to.
    pub fn lcm_power(&self) -> u64 {
        self.lcm_power
    }

    /// `H^L`.
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// The same height expressed at power `power`, which must be a multiple
    /// of the current one.
    pub fn at_power(&self, power: u64) -> Result<ExactHeight> {
        if power == 0 || power % self.lcm_power != 0 {
            return Err(Error::domain(format!(
                "cannot express H^{} as H^{power}",
                self.lcm_power
            )));
        }
        Ok(ExactHeight {
            lcm_power: power,
            value: pow_ratio(&self.value, power / self.lcm_power),
        })
    }

    /// Exact product of two heights at a common power.
    pub fn mul(&self, other: &ExactHeight) -> ExactHeight {
        let l = self.lcm_power.lcm(&other.lcm_power);
        let a = self.at_power(l).expect("multiple");
        let b = other.at_power(l).expect("multiple");
        ExactHeight::new(l, a.value * b.value)
    }

    /// Exact quotient `self / other` at a common power.
    pub fn div(&self, other: &ExactHeight) -> ExactHeight {
        let l = self.lcm_power.lcm(&other.lcm_power);
        let a = self.at_power(l).expect("multiple");
        let b = other.at_power(l).expect("multiple");
        ExactHeight::new(l, a.value / b.value)
    }

    /// `ln H`, for reporting.
    pub fn ln(&self) -> f64 {
        (ln_big(self.value.numer()) - ln_big(self.value.denom())) / self.lcm_power as f64
    }

    /// Decimal approximation of `H`.
    pub fn approx(&self) -> f64 {
        self.ln().exp()
    }
}

impl PartialEq for ExactHeight {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExactHeight {}

impl PartialOrd for ExactHeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactHeight {
    /// Compares `H1` with `H2` through `H1^(L1 L2)` against `H2^(L1 L2)`.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.lcm_power == other.lcm_power {
            return self.value.cmp(&other.value);
        }
        let l = self.lcm_power.lcm(&other.lcm_power);
        let a = pow_ratio(&self.value, l / self.lcm_power);
        let b = pow_ratio(&other.value, l / other.lcm_power);
        a.cmp(&b)
    }
}

impl fmt::Display for ExactHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{} = {}", self.lcm_power, self.value)
    }
}

pub(crate) fn pow_ratio(v: &BigRational, e: u64) -> BigRational {
    let e = u32::try_from(e).expect("exponent fits u32");
    BigRational::new_raw(v.numer().pow(e), v.denom().pow(e))
}

pub(crate) fn pow_u64(base: u64, e: u64) -> BigUint {
    BigUint::from(base).pow(u32::try_from(e).expect("exponent fits u32"))
}

/// `base^e` as a rational for any integer `e`.
pub(crate) fn pow_signed(base: u64, e: i64) -> BigRational {
    let mag = BigInt::from(pow_u64(base, e.unsigned_abs()));
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_big<T: Into<BigInt> + Clone>(v: &T) -> f64 {
    let v: BigInt = v.clone().into();
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = &v >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Factorized linear-form values of one point against every stacky point.
#[derive(Debug, Clone)]
pub struct LocalValues {
    pub point: ProjPoint,
    /// `max(|x|, |y|)`.
    pub naive: u64,
    /// `lambda(P_i, t)`, one per stacky point.
    pub lambdas: Vec<u64>,
    pub factored: Vec<Factorization>,
}

impl LocalValues {
    /// `prod phi_{m_i}(lambda_i^{d_i})^{L/m_i}` over the given exponents.
    fn stacky_product(&self, curve: &StackyCurveP1, exps: &[u32], power: u64) -> BigUint {
        let mut acc = BigUint::one();
        for ((f, &d), p) in self.factored.iter().zip(exps).zip(curve.points()) {
            let m = p.multiplicity;
            if d == 0 {
                continue;
            }
            let phi = f.phi_m_pow(d as u64, m);
            acc *= phi.pow(u32::try_from(power / m as u64).expect("fits"));
        }
        acc
    }
}

fn scaled_exponent(r: Rational64, power: u64) -> i64 {
    let v = r * Rational64::from_integer(power as i64);
    assert!(v.is_integer(), "power {power} does not clear {r}");
    v.to_integer()
}

impl StackyCurveP1 {
    /// Computes and factors `lambda(P_i, t)` for every stacky point.
    pub fn local_values(&self, t: &ProjPoint) -> Result<LocalValues> {
        let mut lambdas = Vec::with_capacity(self.len());
        let mut factored = Vec::with_capacity(self.len());
        for p in self.points() {
            let l = lambda(&p.point, t)?;
            lambdas.push(l);
            factored.push(Factorization::of_u64(l)?);
        }
        Ok(LocalValues {
            point: *t,
            naive: t.naive_height(),
            lambdas,
            factored,
        })
    }

    fn check_bundle(&self, bundle: &LineBundle) -> Result<()> {
        LineBundle::new(self, bundle.coarse_degree(), bundle.exponents().to_vec()).map(|_| ())
    }

    /// `H_stacky^L = prod phi_{m_i}(lambda_i^{d_i})^{L/m_i}`.
    pub fn stacky_part(&self, bundle: &LineBundle, t: &ProjPoint) -> Result<ExactHeight> {
        self.check_bundle(bundle)?;
        let local = self.local_values(t)?;
        Ok(self.stacky_part_local(bundle, &local))
    }

    pub fn stacky_part_local(&self, bundle: &LineBundle, local: &LocalValues) -> ExactHeight {
        let l = self.lcm();
        ExactHeight::from_integer(l, local.stacky_product(self, bundle.exponents(), l))
    }

    /// `H_L^L = max^{L deg L} * H_stacky^L`.
    pub fn height(&self, bundle: &LineBundle, t: &ProjPoint) -> Result<ExactHeight> {
        self.check_bundle(bundle)?;
        let local = self.local_values(t)?;
        Ok(self.height_local(bundle, &local))
    }

    pub fn height_local(&self, bundle: &LineBundle, local: &LocalValues) -> ExactHeight {
        let l = self.lcm();
        let stable = pow_signed(local.naive, scaled_exponent(bundle.degree(self), l));
        let stacky = local.stacky_product(self, bundle.exponents(), l);
        ExactHeight::new(l, stable * BigRational::from_integer(stacky.into()))
    }

    /// `H_{-K} = max^chi * prod phi_{m_i}(lambda_i)^{1/m_i}`.
    pub fn anticanonical_height(&self, t: &ProjPoint) -> Result<ExactHeight> {
        self.height(&self.anticanonical_bundle(), t)
    }

    pub fn anticanonical_height_local(&self, local: &LocalValues) -> ExactHeight {
        self.height_local(&self.anticanonical_bundle(), local)
    }

    /// `H_K = max^{-chi} * prod r_{m_i}(lambda_i)^{1/m_i}`, evaluated from the
    /// `r_m` form directly.
    pub fn canonical_height(&self, t: &ProjPoint) -> Result<ExactHeight> {
        let local = self.local_values(t)?;
        Ok(self.canonical_height_local(&local))
    }

    pub fn canonical_height_local(&self, local: &LocalValues) -> ExactHeight {
        let l = self.lcm();
        let stable = pow_signed(local.naive, -scaled_exponent(self.euler_char(), l));
        let mut stacky = BigUint::one();
        for (f, p) in local.factored.iter().zip(self.points()) {
            let m = p.multiplicity;
            stacky *= f.r_m(m).pow((l / m as u64) as u32);
        }
        ExactHeight::new(l, stable * BigRational::from_integer(stacky.into()))
    }

    /// `(prod phi_{m_i}(lambda_i)^{1/m_i} * max^delta)^{L'}` with
    /// `L' = lcm(L, denom(delta))`.
    pub fn perturbed_height(&self, t: &ProjPoint, delta: Rational64) -> Result<ExactHeight> {
        let local = self.local_values(t)?;
        Ok(self.perturbed_height_local(&local, delta))
    }

    pub fn perturbed_height_local(&self, local: &LocalValues, delta: Rational64) -> ExactHeight {
        let power = self.lcm().lcm(&(delta.denom().unsigned_abs()));
        let stable = pow_signed(local.naive, scaled_exponent(delta, power));
        let stacky = local.stacky_product(self, &vec![1; self.len()], power);
        ExactHeight::new(power, stable * BigRational::from_integer(stacky.into()))
    }

    /// `prod rad_{m_i}(lambda_i^{d_i})`, which equals `H_L * H_{L^-1}`.
    pub fn dual_product(&self, bundle: &LineBundle, t: &ProjPoint) -> Result<BigUint> {
        self.check_bundle(bundle)?;
        let local = self.local_values(t)?;
        Ok(self.dual_product_local(bundle, &local))
    }

    pub fn dual_product_local(&self, bundle: &LineBundle, local: &LocalValues) -> BigUint {
        local
            .factored
            .iter()
            .zip(bundle.exponents())
            .zip(self.points())
            .map(|((f, &d), p)| f.rad_m_pow(d as u64, p.multiplicity))
            .product()
    }

    /// Height of `L^{(x) n}`: the stable part raised to `n`, stacky exponents
    /// `n d_i mod m_i`.
    pub fn tensor_power_height(
        &self,
        bundle: &LineBundle,
        n: i64,
        t: &ProjPoint,
    ) -> Result<ExactHeight> {
        self.check_bundle(bundle)?;
        self.height(&bundle.tensor_power(self, n), t)
    }
}
