use crate::error::{Error, Result};

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::domain(format!(
            "jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let a = (a as i128).rem_euclid(n as i128) as u64;
    Ok(jacobi_u64(a, n))
}

/// Jacobi symbol for `0 <= a` and odd `n`, by binary reciprocity.
pub fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let s = a.trailing_zeros();
        a >>= s;
        if s % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}
