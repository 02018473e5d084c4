//! Smallest-prime-factor sieve and the per-integer tables the census loops read.

/// Smallest prime factor of every integer up to a fixed limit.
///
/// Immutable once built, so one instance can be shared across worker threads.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        if n >= 1 {
            spf[1] = 1;
        }
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    /// Smallest prime factor of `n` (1 for `n == 1`).
    #[inline]
    pub fn spf(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    /// Prime/exponent pairs of `n`, ascending.
    pub fn factor(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Square-free part of every integer `0..=limit` (entry 0 is 0).
    pub fn sqf_table(&self) -> Vec<u32> {
        self.table(|n| {
            self.factor(n)
                .into_iter()
                .filter(|&(_, e)| e % 2 == 1)
                .map(|(p, _)| p)
                .product()
        })
    }

    /// `phi_m` of every integer `0..=limit`, saturating at `u64::MAX`.
    pub fn phi_table(&self, m: u32) -> Vec<u64> {
        let mut out = vec![0u64; self.spf.len()];
        for n in 1..self.spf.len() {
            let mut acc: u64 = 1;
            for (p, e) in self.factor(n as u32) {
                let r = e % m;
                if r != 0 {
                    acc = acc.saturating_mul((p as u64).saturating_pow(m - r));
                }
            }
            out[n] = acc;
        }
        out
    }

    /// Ordinary radical of every integer `0..=limit`.
    pub fn radical_table(&self) -> Vec<u32> {
        self.table(|n| self.factor(n).into_iter().map(|(p, _)| p).product())
    }

    fn table(&self, f: impl Fn(u32) -> u32) -> Vec<u32> {
        let mut out = vec![0u32; self.spf.len()];
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = f(n as u32);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spf_small() {
        let s = SpfSieve::new(30);
        assert_eq!(s.spf(1), 1);
        assert_eq!(s.spf(2), 2);
        assert_eq!(s.spf(15), 3);
        assert_eq!(s.spf(29), 29);
        assert_eq!(s.factor(24), vec![(2, 3), (3, 1)]);
    }

    #[test]
    fn tables_agree_with_definitions() {
        let s = SpfSieve::new(100);
        let sqf = s.sqf_table();
        let rad = s.radical_table();
        let phi3 = s.phi_table(3);
        assert_eq!(sqf[12], 3);
        assert_eq!(sqf[49], 1);
        assert_eq!(rad[72], 6);
        assert_eq!(phi3[4], 2);
        assert_eq!(phi3[8], 1);
        assert_eq!(phi3[12], 2 * 9);
    }
}
