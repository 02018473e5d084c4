//! Prime factorization of machine-size integers.
//!
//! Trial division by the primes below [`TRIAL_LIMIT`], then a deterministic
//! Miller-Rabin test and Brent's variant of Pollard rho on the cofactor.

use std::collections::BTreeMap;

use num_integer::Integer;

/// Primes below this bound are removed by trial division.
pub const TRIAL_LIMIT: u64 = 1 << 10;

/// Witness set that makes Miller-Rabin exact for every `u64`.
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in MR_BASES.iter() {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Returns a nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    const BATCH: usize = 128;
    let mut c = 1u64;
    loop {
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        let mut y = 2u64;
        let mut x = y;
        let mut ys = y;
        let mut g = 1u64;
        let mut q = 1u64;
        let mut r = 1usize;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // the batched product hit zero mod n; replay one step at a time
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g < n {
            return g;
        }
        c += 1;
    }
}

fn push_factors(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    if let Some(r) = exact_sqrt(n) {
        let mut inner = BTreeMap::new();
        push_factors(r, &mut inner);
        for (p, e) in inner {
            *out.entry(p).or_insert(0) += 2 * e;
        }
        return;
    }
    let d = pollard_brent(n);
    push_factors(d, out);
    push_factors(n / d, out);
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// Prime factorization of `n >= 1` as an ordered prime -> exponent map.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.insert(2, tz);
        n >>= tz;
    }
    let mut p = 3u64;
    while p < TRIAL_LIMIT && p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.insert(p, e);
        }
        p += 2;
    }
    if n == 1 {
        return out;
    }
    if n < TRIAL_LIMIT * TRIAL_LIMIT {
        out.insert(n, 1);
        return out;
    }
    push_factors(n, &mut out);
    out
}
