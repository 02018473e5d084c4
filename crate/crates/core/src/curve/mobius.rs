//! Automorphisms of P^1 and the two transport bounds built on them: the
//! `phi_m` comparison under a Mobius map, and the height quotient against a
//! totally ramified canonical cover.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::height::{pow_u64, ExactHeight};
use super::{lambda, ProjPoint, StackyCurveP1, StackyPoint};
use crate::arith::Factorization;
use crate::error::{Error, Result};
use crate::report::ser_display;

/// Integral matrix `[[a, b], [c, d]]` acting on column vectors `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mobius {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        if m.det() == 0 {
            return Err(Error::domain(format!("singular matrix [[{a},{b}],[{c},{d}]]")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    /// Adjugate matrix; it induces the inverse automorphism.
    pub fn adjugate(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Smallest non-negative determinant over the integral representatives
    /// of the induced automorphism: `|det| / content^2`.
    pub fn min_det(&self) -> u64 {
        let g = self.content() as i128;
        u64::try_from(self.det().unsigned_abs() / (g * g) as u128).expect("fits")
    }

    pub fn apply(&self, t: &ProjPoint) -> Result<ProjPoint> {
        let (x, y) = (t.x() as i128, t.y() as i128);
        ProjPoint::from_i128(
            self.a as i128 * x + self.b as i128 * y,
            self.c as i128 * x + self.d as i128 * y,
        )
    }

    /// Image curve: stacky points moved, multiplicities kept.
    pub fn transform_curve(&self, curve: &StackyCurveP1) -> Result<StackyCurveP1> {
        let points = curve
            .points()
            .iter()
            .map(|p| {
                Ok(StackyPoint {
                    point: self.apply(&p.point)?,
                    multiplicity: p.multiplicity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        StackyCurveP1::new(points)
    }
}

/// One stacky point's comparison of `phi_m(lambda)` before and after a map.
#[derive(Debug, Clone, Serialize)]
pub struct TransportEntry {
    pub multiplicity: u32,
    #[serde(serialize_with = "ser_display")]
    pub phi_before: BigUint,
    #[serde(serialize_with = "ser_display")]
    pub phi_after: BigUint,
    /// `rad_m(det alpha)^{m-1}` with the minimal determinant.
    #[serde(serialize_with = "ser_display")]
    pub rad_m_factor: BigUint,
    /// `rad_m(det alpha^{-1})^{m-1}`.
    #[serde(serialize_with = "ser_display")]
    pub rad_m_inverse_factor: BigUint,
    /// `rad(det alpha)^{m-1}`, the coarser radical bound.
    #[serde(serialize_with = "ser_display")]
    pub rad_factor: BigUint,
    #[serde(serialize_with = "ser_display")]
    pub rad_inverse_factor: BigUint,
}

impl TransportEntry {
    /// `phi_after <= rad_m(det)^{m-1} phi_before`.
    pub fn rad_m_upper(&self) -> bool {
        self.phi_after <= &self.rad_m_factor * &self.phi_before
    }

    /// `rad_m(det^-1)^{-(m-1)} phi_before <= phi_after`.
    pub fn rad_m_lower(&self) -> bool {
        self.phi_before <= &self.rad_m_inverse_factor * &self.phi_after
    }

    pub fn rad_upper(&self) -> bool {
        self.phi_after <= &self.rad_factor * &self.phi_before
    }

    pub fn rad_lower(&self) -> bool {
        self.phi_before <= &self.rad_inverse_factor * &self.phi_after
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportReport {
    pub matrix: Mobius,
    pub point: ProjPoint,
    pub image: ProjPoint,
    pub min_det: u64,
    pub min_det_inverse: u64,
    pub entries: Vec<TransportEntry>,
}

impl TransportReport {
    /// Both sides of the `rad_m(det)` bound hold at every stacky point.
    pub fn rad_m_bound_holds(&self) -> bool {
        self.entries.iter().all(|e| e.rad_m_upper() && e.rad_m_lower())
    }

    /// Both sides of the `rad(det)` bound hold at every stacky point.
    pub fn rad_bound_holds(&self) -> bool {
        self.entries.iter().all(|e| e.rad_upper() && e.rad_lower())
    }
}

/// Compares `phi_{m_i}(lambda(P_i, t))` with
/// `phi_{m_i}(lambda(alpha P_i, alpha t))` for every stacky point.
pub fn transport_bounds(
    curve: &StackyCurveP1,
    alpha: &Mobius,
    t: &ProjPoint,
) -> Result<TransportReport> {
    let image = alpha.apply(t)?;
    let det = Factorization::of_u64(alpha.min_det())?;
    let det_inv = Factorization::of_u64(alpha.adjugate().min_det())?;
    let mut entries = Vec::with_capacity(curve.len());
    for p in curve.points() {
        let m = p.multiplicity;
        let before = Factorization::of_u64(lambda(&p.point, t)?)?;
        let after = Factorization::of_u64(lambda(&alpha.apply(&p.point)?, &image)?)?;
        entries.push(TransportEntry {
            multiplicity: m,
            phi_before: before.phi_m(m),
            phi_after: after.phi_m(m),
            rad_m_factor: det.rad_m(m).pow(m - 1),
            rad_m_inverse_factor: det_inv.rad_m(m).pow(m - 1),
            rad_factor: det.radical().pow(m - 1),
            rad_inverse_factor: det_inv.radical().pow(m - 1),
        });
    }
    Ok(TransportReport {
        matrix: *alpha,
        point: *t,
        image,
        min_det: alpha.min_det(),
        min_det_inverse: alpha.adjugate().min_det(),
        entries,
    })
}

/// `Q = H_{-K}(curve) / H_{-K}(cover)` against the triangle-inequality
/// constant `prod_{i dropped} (|alpha_i| + |beta_i|)^{1 - 1/m_i}`, both at
/// power `L = lcm(m_i)` of the full curve.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientCheck {
    pub power: u64,
    #[serde(serialize_with = "ser_display")]
    pub quotient: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub bound: BigUint,
}

impl QuotientCheck {
    pub fn holds(&self) -> bool {
        self.quotient <= BigRational::from_integer(BigInt::from(self.bound.clone()))
    }
}

impl StackyCurveP1 {
    pub fn cover_quotient(&self, keep: &[usize], t: &ProjPoint) -> Result<QuotientCheck> {
        let cover = self.canonical_cover_reduce(keep)?;
        let power = self.lcm();
        let q: ExactHeight = self
            .anticanonical_height(t)?
            .div(&cover.anticanonical_height(t)?)
            .at_power(power)?;
        let mut bound = BigUint::from(1u32);
        for (i, p) in self.points().iter().enumerate() {
            if keep.contains(&i) {
                continue;
            }
            let m = p.multiplicity as u64;
            bound *= pow_u64(p.point.l1_norm(), power - power / m);
        }
        Ok(QuotientCheck {
            power,
            quotient: q.value().clone(),
            bound,
        })
    }
}
