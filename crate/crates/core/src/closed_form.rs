//! Closed-form resistance formulas in Fibonacci and Lucas numbers.
//!
//! All three formulas are evaluated in exact rational arithmetic; signed
//! Fibonacci indices are allowed wherever an index expression can go negative.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::validate_bent;
use crate::numeric::{neg_one_pow, Rational};
use crate::sequences::{fib, lucas};

fn f(i: i64) -> BigInt {
    fib(i)
}

fn l(i: i64) -> BigInt {
    lucas(i)
}

/// Parameters of a bent 2-tree in every form the formulas use.
///
/// `m = n - 2` triangles, bend at `k`, `ell = m - k + 1 = n - k - 1` right
/// transforms and `p = k - 2` left transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BentParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub ell: usize,
    pub p: usize,
}

impl BentParams {
    /// Validates `n >= 6`, `3 <= k <= n - 3` and derives the rest.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        validate_bent(n, k)?;
        Ok(Self {
            n,
            m: n - 2,
            k,
            ell: n - k - 1,
            p: k - 2,
        })
    }

    /// Same parameters from the triangle count `m`.
    pub fn from_triangles(m: usize, k: usize) -> Result<Self> {
        Self::new(m + 2, k)
    }
}

/// `F_i F_{i+1} / (L_i L_{i+1})`, the `i`-th tail resistance.
pub fn tail_term(i: i64) -> Rational {
    Rational::ratio(f(i) * f(i + 1), l(i) * l(i + 1))
}

/// Closed form of the `j`-th transform outputs on a unit chain:
/// `(t_j, s_j, b_j) = (F_j F_{j+1} / (L_j L_{j+1}), F_j^2 / F_{2j+2}, F_{j+1} / L_{j+1})`.
pub fn tail_triple_closed(j: usize) -> (Rational, Rational, Rational) {
    let j = j as i64;
    let fj = f(j);
    (
        tail_term(j),
        Rational::ratio(&fj * &fj, f(2 * j + 2)),
        Rational::ratio(f(j + 1), l(j + 1)),
    )
}

/// Partial sum `sum_{i=1}^{j} F_i F_{i+1} / (L_i L_{i+1})` by direct
/// summation. Prefix sums are memoized for the life of the process.
pub fn tail_sum(j: usize) -> Rational {
    static PREFIX: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    let prefix = PREFIX.get_or_init(|| RwLock::new(vec![Rational::zero()]));
    if let Some(v) = prefix.read().unwrap().get(j) {
        return v.clone();
    }
    let mut sums = prefix.write().unwrap();
    while sums.len() <= j {
        let i = sums.len();
        let next = &sums[i - 1] + tail_term(i as i64);
        sums.push(next);
    }
    sums[j].clone()
}

/// `((j+1) L_{j+1} - F_{j+1}) / (5 L_{j+1})`, the closed form of [`tail_sum`].
pub fn tail_sum_closed(j: usize) -> Rational {
    let m = j as i64 + 1;
    let lm = l(m);
    Rational::ratio(BigInt::from(m) * &lm - f(m), lm * 5u8)
}

/// `r_m(j, j+k)` on the straight 2-tree with `m` triangles:
///
/// `sum_{i=1}^{k} (F_i F_{i+2j-2} - F_{i-1} F_{i+2j-3}) F_{2m-2i-2j+5} / F_{2m+2}`.
pub fn straight_pair_resistance(m: usize, j: usize, k: usize) -> Result<Rational> {
    if m < 1 || j < 1 || k < 1 || j + k > m + 2 {
        return Err(Error::InvalidParams(format!(
            "need m >= 1 and 1 <= j < j+k <= m+2 (got m = {m}, j = {j}, k = {k})"
        )));
    }
    let (m, j) = (m as i64, j as i64);
    let numerator: BigInt = (1..=k as i64)
        .map(|i| {
            (f(i) * f(i + 2 * j - 2) - f(i - 1) * f(i + 2 * j - 3)) * f(2 * m - 2 * i - 2 * j + 5)
        })
        .sum();
    Ok(Rational::ratio(numerator, f(2 * m + 2)))
}

/// Product form of `r_{m,k}(1, n)`:
///
/// ```text
/// (F_{2ℓ+2} F_{k-1}^2 + F_{2k-2} F_ℓ^2)(F_{2ℓ+2} F_{k-2}^2 + F_{2k-2} F_{ℓ+1}^2 + F_{2k-2} F_{2ℓ+2})
/// ------------------------------------------------------------------------------------------ + tails
///                              F_{2k-2} F_{2ℓ+2} F_{2m+2}
/// ```
///
/// where the tails are the partial sums up to `k - 2` and up to `ℓ`.
pub fn bent_resistance_product(params: &BentParams) -> Rational {
    let (k, ell, m) = (params.k as i64, params.ell as i64, params.m as i64);
    let f2l2 = f(2 * ell + 2);
    let f2k2 = f(2 * k - 2);
    let sq = |i: i64| {
        let v = f(i);
        &v * &v
    };
    let first = &f2l2 * sq(k - 1) + &f2k2 * sq(ell);
    let second = &f2l2 * sq(k - 2) + &f2k2 * sq(ell + 1) + &f2k2 * &f2l2;
    let main = Rational::ratio(first * second, &f2k2 * &f2l2 * f(2 * m + 2));
    main + tail_sum(params.p) + tail_sum(params.ell)
}

/// Alternating form of `r_{m,k}(1, n)`:
///
/// `(m+1)/5 + 4 F_{m+1} / (5 L_{m+1}) + sum_{j=3}^{k} (-1)^j F_{m-2j+3} (F_{m+2} + F_{j-2} F_{m-j+1}) / F_{2m+2}`.
pub fn bent_resistance_alternating(params: &BentParams) -> Rational {
    let (k, m) = (params.k as i64, params.m as i64);
    let fm2 = f(m + 2);
    let sum: BigInt = (3..=k)
        .map(|j| neg_one_pow(j) * f(m - 2 * j + 3) * (&fm2 + f(j - 2) * f(m - j + 1)))
        .sum();
    let base = Rational::ratio(m + 1, 5) + Rational::ratio(f(m + 1) * 4u8, l(m + 1) * 5u8);
    base + Rational::ratio(sum, f(2 * m + 2))
}

/// `(-1)^{k+1} F_{m-2k+1} (F_{m+2} + F_{k-1} F_{m-k}) / F_{2m+2}`, the change
/// in `r_{m,k}(1, n)` when the bend moves from `k` to `k + 1`.
pub fn telescoping_increment(m: usize, k: usize) -> Rational {
    let (m, k) = (m as i64, k as i64);
    let num = neg_one_pow(k + 1) * f(m - 2 * k + 1) * (f(m + 2) + f(k - 1) * f(m - k));
    Rational::ratio(num, f(2 * m + 2))
}
