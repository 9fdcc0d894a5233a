//! Multi-precision binary floating point for the places where double
//! precision cancels catastrophically: log-factorial divided differences,
//! alternating binomial sums of logarithms and the inverse-gamma
//! coefficients.
//!
//! Logarithms of integers are assembled from a cached table of prime
//! logarithms, so `ln n` and `ln n!` cost a handful of multiplications once
//! the table is warm.

use std::sync::Mutex;

use dashu_base::Sign;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};

use crate::exactnum::{primes_up_to, valuation};

pub type BigFloat = FBig<HalfEven, 2>;

/// Guard bits added on top of every requested precision.
const GUARD_BITS: usize = 32;

/// Binary precision needed for `digits` significant decimal digits.
pub fn digits_to_bits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

pub fn zero(bits: usize) -> BigFloat {
    BigFloat::ZERO.with_precision(bits).value()
}

pub fn from_int(n: impl Into<IBig>, bits: usize) -> BigFloat {
    BigFloat::from(n.into()).with_precision(bits).value()
}

pub fn from_uint(n: &UBig, bits: usize) -> BigFloat {
    BigFloat::from(IBig::from(n.clone())).with_precision(bits).value()
}

/// Exact conversion of a finite double, then rounded to `bits`.
pub fn from_f64(x: f64, bits: usize) -> BigFloat {
    BigFloat::try_from(x)
        .expect("finite f64")
        .with_precision(bits)
        .value()
}

pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_f64().value()
}

/// Sign and natural log of the magnitude, usable when the value itself
/// over- or underflows a double. `None` for zero.
pub fn signed_log(x: &BigFloat) -> Option<(f64, f64)> {
    if x.repr().is_zero() {
        return None;
    }
    let sign = match x.sign() {
        Sign::Positive => 1.0,
        Sign::Negative => -1.0,
    };
    let mag = if sign < 0.0 { -x.clone() } else { x.clone() };
    let ln = mag.with_precision(64).value().ln();
    Some((sign, to_f64(&ln)))
}

struct PrimeLogs {
    bits: usize,
    primes: Vec<u64>,
    logs: Vec<BigFloat>,
}

static PRIME_LOGS: Mutex<Option<PrimeLogs>> = Mutex::new(None);

/// `ln p` for every prime `p <= limit`, at least `bits` bits precise.
///
/// One table is kept; a request for more precision rebuilds it and a
/// request for more primes extends it.
pub fn prime_logs(limit: u64, bits: usize) -> Vec<(u64, BigFloat)> {
    let bits = bits.max(64);
    let tier = bits.div_ceil(256) * 256;
    let mut guard = PRIME_LOGS.lock().unwrap();
    let rebuild = guard.as_ref().is_none_or(|t| t.bits < bits);
    if rebuild {
        let old_limit = guard.as_ref().and_then(|t| t.primes.last().copied()).unwrap_or(0);
        let primes = primes_up_to(limit.max(old_limit).max(2));
        let logs = primes.iter().map(|&p| from_int(p, tier).ln()).collect();
        *guard = Some(PrimeLogs { bits: tier, primes, logs });
    }
    let table = guard.as_mut().unwrap();
    if table.primes.last().copied().unwrap_or(0) < limit {
        let start = table.primes.len();
        let primes = primes_up_to(limit);
        for &p in &primes[start..] {
            table.logs.push(from_int(p, table.bits).ln());
        }
        table.primes = primes;
    }
    table
        .primes
        .iter()
        .zip(&table.logs)
        .take_while(|(&p, _)| p <= limit)
        .map(|(&p, l)| (p, l.clone().with_precision(bits).value()))
        .collect()
}

/// `ln n` for `n >= 1`.
pub fn ln_int(n: u64, bits: usize) -> BigFloat {
    assert!(n >= 1, "ln of zero");
    let mut acc = zero(bits);
    if n == 1 {
        return acc;
    }
    for (p, lp) in prime_logs(n, bits) {
        if n.is_multiple_of(p) {
            acc += lp * from_int(valuation(n, p), bits);
        }
    }
    acc
}

/// `[ln 0!, ln 1!, ..., ln max!]`.
pub fn ln_factorials(max: u64, bits: usize) -> Vec<BigFloat> {
    let logs = prime_logs(max.max(2), bits);
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = zero(bits);
    out.push(acc.clone());
    for m in 1..=max {
        let mut rest = m;
        for (p, lp) in &logs {
            if rest == 1 {
                break;
            }
            let v = valuation(rest, *p);
            if v > 0 {
                rest /= p.pow(v);
                acc += lp * from_int(v, bits);
            }
        }
        out.push(acc.clone());
    }
    out
}
