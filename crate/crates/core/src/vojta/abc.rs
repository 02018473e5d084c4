//! abc hits `a + b = c <= N` with `rad(abc) < c`.
//!
//! Sort the three radicals as `r1 <= r2 <= r3`. A hit has `r1 r2 r3 < c <= N`,
//! so `r1^3 < N` and `r1 r2^2 < N`. The scan walks pairs `(u, v)` with
//! `rad(u) = r1` and `rad(v) = r2` inside those bounds; the third entry is
//! `u + v` or `|u - v|`. Every hit is reached, and the pair search is far
//! smaller than the `N^2 / 2` coprime pairs.

use std::collections::BTreeSet;

use num_integer::{Integer, Roots};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::SpfSieve;
use crate::error::{Error, Result};

/// Largest `N` the scan accepts; the radical table is `4 (N + 1)` bytes.
pub const MAX_SCAN: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub radical: u64,
    pub quality: f64,
}

impl AbcTriple {
    /// Recomputes everything from `(a, b)`.
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 || a > b || a.gcd(&b) != 1 {
            return Err(Error::domain(format!("({a}, {b}) is not a coprime pair with 0 < a <= b")));
        }
        let c = a.checked_add(b).ok_or_else(|| Error::Overflow("a + b".into()))?;
        let radical = [a, b, c]
            .iter()
            .map(|&n| crate::arith::radical(n as i64))
            .try_fold(1u64, |acc, r| r.map(|r| acc * r))?;
        Ok(AbcTriple {
            a,
            b,
            c,
            radical,
            quality: quality(c, radical),
        })
    }

    pub fn is_hit(&self) -> bool {
        self.radical < self.c
    }
}

pub fn quality(c: u64, radical: u64) -> f64 {
    (c as f64).ln() / (radical as f64).ln()
}

/// Quality descending, then `c`, then `a`.
fn rank(x: &AbcTriple, y: &AbcTriple) -> std::cmp::Ordering {
    y.quality
        .total_cmp(&x.quality)
        .then(x.c.cmp(&y.c))
        .then(x.a.cmp(&y.a))
}

/// All abc hits with `c <= n`, best quality first.
pub fn abc_scan(n: u64) -> Result<Vec<AbcTriple>> {
    if n > MAX_SCAN {
        return Err(Error::BoundExceeded {
            needed: n as u128,
            ceiling: MAX_SCAN as u128,
        });
    }
    if n < 3 {
        return Ok(Vec::new());
    }
    let rad = SpfSieve::new(n as u32).radical_table();
    // Members with rad(v)^2 < n, ordered by radical.
    let mut small: Vec<(u32, u32)> = (1..=n as u32)
        .filter_map(|v| {
            let r = rad[v as usize];
            ((r as u64) * (r as u64) < n).then_some((r, v))
        })
        .collect();
    small.sort_unstable();
    let r1_max = (n - 1).cbrt();
    let firsts = small.partition_point(|&(r, _)| (r as u64) <= r1_max);
    let hits: Vec<(u64, u64)> = (0..firsts)
        .into_par_iter()
        .flat_map_iter(|k| {
            let (r1, u) = small[k];
            let (r1, u) = (r1 as u64, u as u64);
            let mut found = Vec::new();
            let end = small.partition_point(|&(r, _)| r1 * (r as u64) * (r as u64) < n);
            for &(r2, v) in &small[k..end] {
                let v = v as u64;
                if u.gcd(&v) != 1 {
                    continue;
                }
                let pair = r1 * r2 as u64;
                let s = u + v;
                if s <= n && pair * (rad[s as usize] as u64) < s {
                    found.push((u.min(v), u.max(v)));
                }
                let d = u.abs_diff(v);
                let big = u.max(v);
                if d > 0 && pair * (rad[d as usize] as u64) < big {
                    found.push((d.min(u.min(v)), d.max(u.min(v))));
                }
            }
            found
        })
        .collect();
    let unique: BTreeSet<(u64, u64)> = hits.into_iter().collect();
    let mut out = unique
        .into_iter()
        .map(|(a, b)| {
            let c = a + b;
            let radical = rad[a as usize] as u64 * rad[b as usize] as u64 * rad[c as usize] as u64;
            AbcTriple {
                a,
                b,
                c,
                radical,
                quality: quality(c, radical),
            }
        })
        .collect::<Vec<_>>();
    out.sort_by(rank);
    Ok(out)
}

/// Direct `O(n^2)` enumeration of hits, for cross-checking small `n`.
pub fn abc_scan_naive(n: u64) -> Result<Vec<AbcTriple>> {
    let mut out = Vec::new();
    for c in 3..=n {
        for a in 1..=c / 2 {
            let b = c - a;
            if a.gcd(&b) == 1 {
                let t = AbcTriple::new(a, b)?;
                if t.is_hit() {
                    out.push(t);
                }
            }
        }
    }
    out.sort_by(rank);
    Ok(out)
}

/// The first `k` entries of a ranked scan.
pub fn top(triples: &[AbcTriple], k: usize) -> &[AbcTriple] {
    &triples[..k.min(triples.len())]
}
