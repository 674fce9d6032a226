//! Fibonacci and Lucas numbers at every signed index.
//!
//! Values up to a configurable index bound are memoized in a process-wide
//! table filled bottom-up. Indices past the bound are computed on demand by
//! fast doubling and not stored, which keeps memory bounded for very large
//! indices (F_1000000 alone is ~87 kB).

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Environment variable overriding the memoization bound.
pub const CACHE_LIMIT_ENV: &str = "TWO_TREE_CACHE_LIMIT";

pub const DEFAULT_CACHE_LIMIT: usize = 16_384;

#[derive(Default)]
struct Tables {
    fib: Vec<BigInt>,
    lucas: Vec<BigInt>,
}

/// Memo table for both sequences at nonnegative indices `0..=limit`.
///
/// Readers and writers synchronize through an `RwLock`; every value is
/// written once and never changes, so concurrent callers always agree.
pub struct SequenceCache {
    limit: usize,
    tables: RwLock<Tables>,
}

impl SequenceCache {
    pub fn with_limit(limit: usize) -> Self {
        let tables = Tables {
            fib: vec![BigInt::zero(), BigInt::one()],
            lucas: vec![BigInt::from(2u8), BigInt::one()],
        };
        Self {
            limit: limit.max(1),
            tables: RwLock::new(tables),
        }
    }

    /// Reads the bound from [`CACHE_LIMIT_ENV`], falling back to
    /// [`DEFAULT_CACHE_LIMIT`] when unset or unparsable.
    pub fn from_env() -> Self {
        let limit = std::env::var(CACHE_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_CACHE_LIMIT);
        Self::with_limit(limit)
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Number of memoized nonnegative indices.
    pub fn cached_len(&self) -> usize {
        self.tables.read().unwrap().fib.len()
    }

    /// F_n, with F_{-r} = (-1)^{r+1} F_r.
    pub fn fib(&self, n: i64) -> BigInt {
        let r = n.unsigned_abs();
        let value = self.fib_nonneg(r);
        if n < 0 && r.is_multiple_of(2) {
            -value
        } else {
            value
        }
    }

    /// L_n, with L_{-r} = (-1)^r L_r.
    pub fn lucas(&self, n: i64) -> BigInt {
        let r = n.unsigned_abs();
        let value = self.lucas_nonneg(r);
        if n < 0 && r % 2 == 1 {
            -value
        } else {
            value
        }
    }

    fn fib_nonneg(&self, r: u64) -> BigInt {
        match usize::try_from(r) {
            Ok(i) if i <= self.limit => {
                self.ensure(i);
                self.tables.read().unwrap().fib[i].clone()
            }
            _ => fib_pair(r).0,
        }
    }

    fn lucas_nonneg(&self, r: u64) -> BigInt {
        match usize::try_from(r) {
            Ok(i) if i <= self.limit => {
                self.ensure(i);
                self.tables.read().unwrap().lucas[i].clone()
            }
            _ => {
                // L_r = 2 F_{r+1} - F_r
                let (f, f1) = fib_pair(r);
                (f1 << 1u8) - f
            }
        }
    }

    fn ensure(&self, index: usize) {
        if self.tables.read().unwrap().fib.len() > index {
            return;
        }
        let mut t = self.tables.write().unwrap();
        while t.fib.len() <= index {
            let len = t.fib.len();
            let f = &t.fib[len - 1] + &t.fib[len - 2];
            let l = &t.lucas[len - 1] + &t.lucas[len - 2];
            t.fib.push(f);
            t.lucas.push(l);
        }
    }
}

/// (F_r, F_{r+1}) by fast doubling.
fn fib_pair(r: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for bit in (0..u64::BITS - r.leading_zeros()).rev() {
        // F_{2k} = F_k (2F_{k+1} - F_k), F_{2k+1} = F_k^2 + F_{k+1}^2
        let c = &a * ((&b << 1u8) - &a);
        let d = &a * &a + &b * &b;
        if (r >> bit) & 1 == 0 {
            a = c;
            b = d;
        } else {
            b = &c + &d;
            a = d;
        }
    }
    (a, b)
}

fn global() -> &'static SequenceCache {
    static CACHE: OnceLock<SequenceCache> = OnceLock::new();
    CACHE.get_or_init(SequenceCache::from_env)
}

/// F_n from the process-wide cache.
pub fn fib(n: i64) -> BigInt {
    global().fib(n)
}

/// L_n from the process-wide cache.
pub fn lucas(n: i64) -> BigInt {
    global().lucas(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn fib_examples() {
        assert_eq!(fib(10), BigInt::from(55));
        assert_eq!(fib(0), BigInt::zero());
        assert_eq!(fib(-4), BigInt::from(-3));
        assert_eq!(fib(-1), BigInt::one());
        assert_eq!(fib(-5), BigInt::from(5));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas(5), BigInt::from(11));
        assert_eq!(lucas(1), BigInt::one());
        assert_eq!(lucas(6), BigInt::from(18));
        assert_eq!(lucas(0), BigInt::from(2));
        assert_eq!(lucas(-1), BigInt::from(-1));
        assert_eq!(lucas(-2), BigInt::from(3));
    }

    #[test]
    fn recurrences_hold_across_zero() {
        for n in -60..=400 {
            assert_eq!(fib(n), fib(n - 1) + fib(n - 2), "fib at {n}");
            assert_eq!(lucas(n), lucas(n - 1) + lucas(n - 2), "lucas at {n}");
        }
    }

    #[test]
    fn lucas_and_doubling_relations() {
        for n in 1..=300 {
            assert_eq!(lucas(n), fib(n + 1) + fib(n - 1));
            assert_eq!(fib(2 * n), lucas(n) * fib(n));
        }
    }

    #[test]
    fn negative_index_sign_rule() {
        for n in 0..=200i64 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(fib(-n) + fib(n) * sign, BigInt::zero());
        }
    }

    #[test]
    fn uncached_path_matches_cached() {
        let small = SequenceCache::with_limit(8);
        let big = SequenceCache::with_limit(1_000);
        for n in -500..=500 {
            assert_eq!(small.fib(n), big.fib(n), "fib {n}");
            assert_eq!(small.lucas(n), big.lucas(n), "lucas {n}");
        }
        assert_eq!(small.cached_len(), 9);
    }

    #[test]
    fn large_indices() {
        // F_500 has 105 digits.
        let f500 = fib(500);
        assert_eq!(f500.to_string().len(), 105);
        assert!(f500.to_string().starts_with("139423224561697880139"));

        let cache = SequenceCache::with_limit(64);
        let n = 1_000_000;
        let f = cache.fib(n);
        let f1 = cache.fib(n + 1);
        let f2 = cache.fib(n + 2);
        assert_eq!(&f + &f1, f2);
        assert_eq!(f.to_string().len(), 208_988);
        assert!(cache.fib(-n).is_negative());
        assert_eq!(cache.lucas(n), cache.fib(n - 1) + f1);
    }

    #[test]
    fn concurrent_readers_agree() {
        let cache = SequenceCache::with_limit(2_000);
        let results: Vec<Vec<BigInt>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|t| {
                    let cache = &cache;
                    s.spawn(move || (0..2_000).rev().step_by(t + 1).map(|n| cache.fib(n)).collect())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (t, values) in results.iter().enumerate() {
            for (idx, v) in values.iter().enumerate() {
                let n = 1_999 - idx as i64 * (t as i64 + 1);
                assert_eq!(*v, fib(n));
            }
        }
    }
}
