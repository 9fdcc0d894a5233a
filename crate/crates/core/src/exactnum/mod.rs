//! Exact integer and rational building blocks.
//!
//! Everything here is exact. Floating-point values only appear through the
//! explicit [`Rational::to_f64`] conversion.

mod rational;

use std::sync::RwLock;

use dashu_int::{IBig, UBig};
use dashu_ratio::Relaxed;

pub use rational::Rational;

/// `n!`.
pub fn factorial(n: u64) -> UBig {
    product_range(1, n)
}

/// Product of the integers in `lo..=hi` (empty product is one), split
/// recursively so the multiplications stay balanced.
fn product_range(lo: u64, hi: u64) -> UBig {
    if lo > hi {
        return UBig::ONE;
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(UBig::ONE, |acc, k| acc * UBig::from(k));
    }
    let mid = lo + (hi - lo) / 2;
    product_range(lo, mid) * product_range(mid + 1, hi)
}

/// Integer binomial coefficient `C(n, k)`, zero for `k > n`.
pub fn binomial(n: u64, k: u64) -> UBig {
    if k > n {
        return UBig::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = UBig::ONE;
    for i in 0..k {
        acc = acc * UBig::from(n - i) / UBig::from(i + 1);
    }
    acc
}

/// Row `n` of Pascal's triangle, `C(n, 0..=n)`.
pub fn binomial_row(n: u64) -> Vec<UBig> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = UBig::ONE;
    row.push(c.clone());
    for k in 0..n {
        c = c * UBig::from(n - k) / UBig::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// Generalised binomial `C(x, n) = x(x-1)...(x-n+1)/n!` for rational `x`.
pub fn binom_general(x: &Rational, n: u64) -> Rational {
    let mut num = Rational::ONE;
    for i in 0..n {
        num *= x - Rational::from(i);
        if num.is_zero() {
            return num;
        }
    }
    num / Rational::from(factorial(n))
}

/// Rising factorial `(x)_n = x(x+1)...(x+n-1)`.
pub fn pochhammer(x: &Rational, n: u64) -> Rational {
    (0..n).fold(Rational::ONE, |acc, i| acc * (x + Rational::from(i)))
}

static STIRLING: RwLock<Vec<Vec<IBig>>> = RwLock::new(Vec::new());

/// Signed Stirling number of the first kind `s(n, k)`.
///
/// Rows of the triangle are memoised; `s(n+1, k) = s(n, k-1) - n s(n, k)`.
pub fn stirling_first(n: usize, k: usize) -> IBig {
    if k > n {
        return IBig::ZERO;
    }
    {
        let table = STIRLING.read().unwrap();
        if let Some(row) = table.get(n) {
            return row[k].clone();
        }
    }
    let mut table = STIRLING.write().unwrap();
    if table.is_empty() {
        table.push(vec![IBig::ONE]);
    }
    while table.len() <= n {
        let m = table.len() - 1;
        let prev = &table[m];
        let mm = IBig::from(m);
        let mut row = Vec::with_capacity(m + 2);
        row.push(IBig::ZERO);
        for j in 1..=m + 1 {
            let left = &prev[j - 1];
            let here = prev.get(j).map(|v| &mm * v).unwrap_or(IBig::ZERO);
            row.push(left - here);
        }
        table.push(row);
    }
    table[n][k].clone()
}

static LAGUERRE_SCALED: RwLock<Vec<IBig>> = RwLock::new(Vec::new());

/// `n! L_n(1)`, which is always an integer.
///
/// Memoised through `A_{n+1} = 2n A_n - n^2 A_{n-1}`, the Laguerre
/// three-term recurrence at `x = 1` multiplied through by `(n+1)!`.
pub fn laguerre_at_one_scaled(n: usize) -> IBig {
    {
        let table = LAGUERRE_SCALED.read().unwrap();
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = LAGUERRE_SCALED.write().unwrap();
    if table.is_empty() {
        table.push(IBig::ONE);
        table.push(IBig::ZERO);
    }
    while table.len() <= n {
        let m = table.len() - 1;
        let mm = IBig::from(m);
        let next = IBig::from(2 * m) * &table[m] - &mm * &mm * &table[m - 1];
        table.push(next);
    }
    table[n].clone()
}

/// Laguerre polynomial value `L_n(1) = sum_k C(n,k) (-1)^k / k!`.
pub fn laguerre_at_one(n: usize) -> Rational {
    Rational::new(laguerre_at_one_scaled(n), IBig::from(factorial(n as u64)))
}

/// Correctly rounded `num / den` without reducing the fraction first.
pub fn ratio_to_f64(num: IBig, den: UBig) -> f64 {
    Relaxed::from_parts(num, den).to_f64().value()
}

/// Primes `<= limit` by a plain sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Exponent of the prime `p` in `n` (`n >= 1`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Exponent of the prime `p` in `n!` (Legendre's formula).
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}
