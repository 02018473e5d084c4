//! Exact integer kernels: factorization, the multiplicative functions
//! `phi_m`, `r_m`, `rad_m`, square-free parts, m-power-free decomposition
//! and Jacobi symbols.
//!
//! All of `phi_m`, `r_m` and `rad_m` act on `|n|`. Powers `n^d` are handled on
//! the exponent vector (`d * ord_p(n) mod m`) so that `n^d` is never formed.

mod factor;
mod jacobi;
mod sieve;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use factor::{exact_sqrt, factor_u64, is_prime};
pub use jacobi::{jacobi, jacobi_u64};
pub use sieve::SpfSieve;

use crate::error::{Error, Result};

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::domain(format!("multiplicity must be >= 2, got {m}")));
    }
    Ok(())
}

/// Sign and prime-power content of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    sign: i8,
    factors: BTreeMap<u64, u32>,
}

impl Factorization {
    pub fn of(n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cannot factor 0"));
        }
        Ok(Factorization {
            sign: if n < 0 { -1 } else { 1 },
            factors: factor_u64(n.unsigned_abs()),
        })
    }

    pub fn of_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cannot factor 0"));
        }
        Ok(Factorization {
            sign: 1,
            factors: factor_u64(n),
        })
    }

    /// Builds a factorization from prime/exponent pairs. Zero exponents are
    /// dropped; primality of the keys is the caller's responsibility.
    pub fn from_parts(sign: i8, pairs: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut factors = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *factors.entry(p).or_insert(0) += e;
            }
        }
        Factorization {
            sign: if sign < 0 { -1 } else { 1 },
            factors,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    /// `ord_p` of the factored integer.
    pub fn ord(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reconstructs `sign * prod p^e`.
    pub fn value(&self) -> BigInt {
        let mag = self.abs_value();
        if self.sign < 0 {
            -BigInt::from(mag)
        } else {
            BigInt::from(mag)
        }
    }

    pub fn abs_value(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(&p, &e)| BigUint::from(p).pow(e))
            .product()
    }

    /// Factorization of the product of two integers.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut factors = self.factors.clone();
        for (&p, &e) in &other.factors {
            *factors.entry(p).or_insert(0) += e;
        }
        Factorization {
            sign: self.sign * other.sign,
            factors,
        }
    }

    fn product_by(&self, exponent: impl Fn(u32) -> u32) -> BigUint {
        let mut acc = BigUint::one();
        for (&p, &e) in &self.factors {
            let k = exponent(e);
            if k > 0 {
                acc *= BigUint::from(p).pow(k);
            }
        }
        acc
    }

    /// `phi_m(|n|^d)`: the least positive `k` with `|n|^d * k` an m-th power.
    pub fn phi_m_pow(&self, d: u64, m: u32) -> BigUint {
        self.product_by(|e| {
            let r = residue(e, d, m);
            if r == 0 {
                0
            } else {
                m - r
            }
        })
    }

    /// `r_m(|n|^d)`: the m-power-free part of `|n|^d`.
    pub fn r_m_pow(&self, d: u64, m: u32) -> BigUint {
        self.product_by(|e| residue(e, d, m))
    }

    /// `rad_m(|n|^d)`: primes whose exponent in `|n|^d` is not divisible by `m`.
    pub fn rad_m_pow(&self, d: u64, m: u32) -> BigUint {
        self.product_by(|e| u32::from(residue(e, d, m) != 0))
    }

    pub fn phi_m(&self, m: u32) -> BigUint {
        self.phi_m_pow(1, m)
    }

    pub fn r_m(&self, m: u32) -> BigUint {
        self.r_m_pow(1, m)
    }

    pub fn rad_m(&self, m: u32) -> BigUint {
        self.rad_m_pow(1, m)
    }

    pub fn radical(&self) -> BigUint {
        self.product_by(|_| 1)
    }

    /// Square-free part of `|n|`.
    pub fn sqf(&self) -> BigUint {
        self.r_m(2)
    }

    /// Number of positive divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.values().map(|&e| e as u64 + 1).product()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn power_free(&self, m: u32) -> Result<PowerFreeDecomposition> {
        check_m(m)?;
        let mut parts = vec![1u64; m as usize];
        for (&p, &e) in &self.factors {
            let j = e % m;
            if j > 0 {
                parts[j as usize - 1] *= p;
            }
            let q = e / m;
            if q > 0 {
                parts[m as usize - 1] *= p.pow(q);
            }
        }
        Ok(PowerFreeDecomposition {
            m,
            sign: self.sign,
            parts,
        })
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[inline]
fn residue(e: u32, d: u64, m: u32) -> u32 {
    ((e as u128 * d as u128) % m as u128) as u32
}

/// `|n| = prod_j z_j^j` with `z_1..z_{m-1}` square-free and pairwise coprime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFreeDecomposition {
    pub m: u32,
    /// Sign of the decomposed integer; the parts describe `|n|`.
    pub sign: i8,
    /// `parts[j - 1] = z_j` for `j = 1..=m`.
    pub parts: Vec<u64>,
}

impl PowerFreeDecomposition {
    /// `z_j` for `1 <= j <= m`.
    pub fn z(&self, j: u32) -> u64 {
        self.parts[j as usize - 1]
    }

    /// `prod_j z_j^j`, which equals `|n|`.
    pub fn reconstruct(&self) -> BigUint {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &z)| BigUint::from(z).pow(i as u32 + 1))
            .product()
    }

    /// `phi_m(|n|) = prod_{j<m} z_j^{m-j}`.
    pub fn phi(&self) -> BigUint {
        self.parts[..self.m as usize - 1]
            .iter()
            .enumerate()
            .map(|(i, &z)| BigUint::from(z).pow(self.m - (i as u32 + 1)))
            .product()
    }
}

pub fn factor(n: i64) -> Result<Factorization> {
    Factorization::of(n)
}

/// Least positive `k` with `n * k` a perfect m-th power.
pub fn phi_m(n: u64, m: u32) -> Result<BigUint> {
    check_m(m)?;
    Ok(Factorization::of_u64(n)?.phi_m(m))
}

/// m-power-free part `prod p^(ord_p(n) mod m)`.
pub fn r_m(n: u64, m: u32) -> Result<u64> {
    check_m(m)?;
    Ok(to_u64(Factorization::of_u64(n)?.r_m(m)))
}

/// Product of the primes whose exponent in `n` is not a multiple of `m`.
pub fn rad_m(n: u64, m: u32) -> Result<u64> {
    check_m(m)?;
    Ok(to_u64(Factorization::of_u64(n)?.rad_m(m)))
}

pub fn radical(n: i64) -> Result<u64> {
    Ok(to_u64(Factorization::of(n)?.radical()))
}

/// Square-free part of `|n|`.
pub fn sqf(n: i64) -> Result<u64> {
    Ok(to_u64(Factorization::of(n)?.sqf()))
}

pub fn power_free_decompose(n: i64, m: u32) -> Result<PowerFreeDecomposition> {
    check_m(m)?;
    Factorization::of(n)?.power_free(m)
}

/// Size function `N_{m,d}([r]) = (-r d) mod m`.
pub fn n_size(m: u32, d: i64, r: u32) -> Result<u32> {
    check_m(m)?;
    if r >= m {
        return Err(Error::domain(format!("residue {r} not in 0..{m}")));
    }
    Ok((-(r as i128) * d as i128).rem_euclid(m as i128) as u32)
}

/// Number of positive divisors of `n >= 1`.
pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(Factorization::of_u64(n)?.divisor_count())
}

// values bounded by |n| always fit
fn to_u64(v: BigUint) -> u64 {
    u64::try_from(v).expect("bounded by the input magnitude")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_phi(n: u64, m: u32) -> u64 {
        (1..)
            .find(|&k| is_perfect_power(n * k, m))
            .expect("some multiplier works")
    }

    fn is_perfect_power(v: u64, m: u32) -> bool {
        let r = (v as f64).powf(1.0 / m as f64).round() as u64;
        (r.saturating_sub(1)..=r + 1).any(|c| c.checked_pow(m) == Some(v))
    }

    #[test]
    fn factor_examples() {
        let f = factor(12).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(f.factors(), &BTreeMap::from([(2, 2), (3, 1)]));
        let one = factor(1).unwrap();
        assert_eq!(one.sign(), 1);
        assert!(one.factors().is_empty());
        let f = factor(-97).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.factors(), &BTreeMap::from([(97, 1)]));
        assert!(matches!(factor(0), Err(Error::Domain(_))));
    }

    #[test]
    fn factor_large_semiprimes_and_powers() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        let f = Factorization::of_u64(p * q).unwrap();
        assert_eq!(f.factors(), &BTreeMap::from([(q, 1), (p, 1)]));
        let f = Factorization::of_u64(4_294_967_291u64.pow(2)).unwrap();
        assert_eq!(f.factors(), &BTreeMap::from([(4_294_967_291, 2)]));
        let f = Factorization::of_u64(1_000_003u64.pow(3)).unwrap();
        assert_eq!(f.factors(), &BTreeMap::from([(1_000_003, 3)]));
        assert!(is_prime(18_446_744_073_709_551_557));
        let f = Factorization::of(i64::MIN).unwrap();
        assert_eq!(f.factors(), &BTreeMap::from([(2, 63)]));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_m(1, 5).unwrap(), BigUint::one());
        assert_eq!(phi_m(12, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(phi_m(4, 3).unwrap(), BigUint::from(2u32));
        assert_eq!(phi_m(7u64.pow(4), 4).unwrap(), BigUint::one());
        // brute-force oracle for the two nontrivial rows
        assert_eq!(brute_phi(12, 2), 3);
        assert_eq!(brute_phi(4, 3), 2);
    }

    #[test]
    fn r_and_rad_examples() {
        assert_eq!(r_m(12, 2).unwrap(), 3);
        assert_eq!(r_m(8, 3).unwrap(), 1);
        assert_eq!(r_m(13, 7).unwrap(), 13);
        assert_eq!(rad_m(12, 2).unwrap(), 3);
        assert_eq!(rad_m(8, 3).unwrap(), 1);
        for m in 2..9 {
            assert_eq!(rad_m(30, m).unwrap(), 30);
        }
        assert_eq!(radical(12).unwrap(), 6);
        assert_eq!(radical(-1).unwrap(), 1);
        assert_eq!(radical(720).unwrap(), 30);
        assert_eq!(sqf(12).unwrap(), 3);
        assert_eq!(sqf(49).unwrap(), 1);
        assert_eq!(sqf(10).unwrap(), 10);
        assert_eq!(sqf(-12).unwrap(), 3);
    }

    #[test]
    fn multiplicity_below_two_rejected() {
        assert!(phi_m(5, 1).is_err());
        assert!(r_m(5, 0).is_err());
        assert!(power_free_decompose(5, 1).is_err());
        assert!(phi_m(0, 2).is_err());
    }

    #[test]
    fn power_free_examples() {
        let d = power_free_decompose(72, 2).unwrap();
        assert_eq!(d.parts, vec![2, 6]);
        let d = power_free_decompose(360, 3).unwrap();
        assert_eq!(d.parts, vec![5, 3, 2]);
        let d = power_free_decompose(-13, 4).unwrap();
        assert_eq!(d.parts, vec![13, 1, 1, 1]);
        assert_eq!(d.sign, -1);
        assert!(power_free_decompose(0, 3).is_err());
    }

    #[test]
    fn n_size_examples() {
        for m in 2..8 {
            for d in -3..10 {
                assert_eq!(n_size(m, d, 0).unwrap(), 0);
            }
        }
        assert_eq!(n_size(2, 1, 1).unwrap(), 1);
        assert_eq!(n_size(7, 3, 2).unwrap(), 1);
        // d = m - 1 recovers the canonical remainder
        for m in 2..9 {
            for r in 0..m {
                assert_eq!(n_size(m, m as i64 - 1, r).unwrap(), r);
            }
        }
        assert!(n_size(3, 1, 3).is_err());
    }

    #[test]
    fn phi_minimality_brute_force() {
        for m in 2..=5u32 {
            for n in 1..=2000u64 {
                let phi = phi_m(n, m).unwrap();
                let phi = u64::try_from(phi).unwrap();
                if phi <= 4000 {
                    assert_eq!(phi, brute_phi(n, m), "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn divisor_count_matches_brute_force() {
        for n in 1..=3000u64 {
            let brute = (1..=n).filter(|d| n % d == 0).count() as u64;
            assert_eq!(divisor_count(n).unwrap(), brute);
        }
    }

    proptest! {
        #[test]
        fn functional_equation(n in 1u64..1_000_000_000_000, m in 2u32..=12) {
            let f = Factorization::of_u64(n).unwrap();
            prop_assert_eq!(f.phi_m(m) * f.r_m(m), f.rad_m(m).pow(m));
        }

        #[test]
        fn perfect_power_iff_trivial(n in 1u64..100_000, m in 2u32..=6) {
            let f = Factorization::of_u64(n).unwrap();
            let pw = f.factors().values().all(|e| e % m == 0);
            prop_assert_eq!(f.phi_m(m).is_one(), pw);
            prop_assert_eq!(f.r_m(m).is_one(), pw);
        }

        #[test]
        fn duality_of_sizes(n in 1u64..1_000_000, m in 2u32..=9, d in 0u64..9) {
            let d = d % m as u64;
            let f = Factorization::of_u64(n).unwrap();
            let dual = (m as u64 - d) % m as u64;
            prop_assert_eq!(f.phi_m_pow(dual, m), f.r_m_pow(d, m));
        }

        #[test]
        fn m_two_self_duality(n in 1u64..10_000_000) {
            let f = Factorization::of_u64(n).unwrap();
            prop_assert_eq!(f.phi_m(2), f.r_m(2));
            prop_assert_eq!(f.r_m(2), f.sqf());
        }

        #[test]
        fn rad_m_at_most_radical(n in 1u64..1_000_000_000, m in 2u32..=12) {
            let f = Factorization::of_u64(n).unwrap();
            prop_assert!(f.rad_m(m) <= f.radical());
        }

        #[test]
        fn decomposition_roundtrip(n in 1i64..1_000_000_000_000, m in 2u32..=8) {
            let d = power_free_decompose(n, m).unwrap();
            prop_assert_eq!(d.reconstruct(), BigUint::from(n as u64));
            prop_assert_eq!(d.phi(), phi_m(n as u64, m).unwrap());
            let back = i64::try_from(d.reconstruct()).unwrap();
            let again = power_free_decompose(back, m).unwrap();
            prop_assert_eq!(&again, &d);
            for j in 1..m {
                prop_assert_eq!(sqf(d.z(j) as i64).unwrap(), d.z(j));
            }
        }
    }
}
