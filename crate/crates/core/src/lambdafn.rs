//! The Λ pseudogamma function,
//!
//! `ln Λ(x) = sum_{n>=1} Γ(x+n)/Γ(x+1-n) (-1)^n/(2n-1) S_n`,
//! `S_n = sum_{k=1..n} (-1)^k (2k-1) ln k / ((n-k)! (k+n-1)!)`.
//!
//! Λ agrees with `n!` at the positive integers and with `1/n!` at the
//! negative ones, and `Λ(x) Λ(-x) = 1` because every term is odd in `x`.

use std::sync::RwLock;

use dashu_int::IBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial_row, valuation};
use crate::hp::{self, BigFloat};
use crate::newton::{sum_series, EvalReport, Exhaustion, TruncationPolicy};

/// Default term cap for Λ: the series converges for every real `x`, but
/// the terms only start shrinking once `n` passes `|x|`.
pub const LAMBDA_DEFAULT_MAX_TERMS: usize = 120;

/// The default policy for Λ (`max_terms` = 120, otherwise the crate
/// defaults).
pub fn default_policy() -> TruncationPolicy {
    TruncationPolicy::default().with_max_terms(LAMBDA_DEFAULT_MAX_TERMS)
}

/// `Γ(x+n)/Γ(x+1-n) = x prod_{k=1..n-1} (x^2 - k^2)`.
pub fn rising_ratio(x: f64, n: usize) -> f64 {
    let x2 = x * x;
    (1..n).fold(x, |acc, k| acc * (x2 - (k * k) as f64))
}

/// Sign and log-magnitude of [`rising_ratio`]; `None` when it is zero.
fn rising_ratio_log(x: f64, n: usize) -> Option<(f64, f64)> {
    let x2 = x * x;
    let mut sign = x.signum();
    let mut ln = x.abs().ln();
    for k in 1..n {
        let f = x2 - (k * k) as f64;
        if f == 0.0 || x == 0.0 {
            return None;
        }
        sign *= f.signum();
        ln += f.abs().ln();
    }
    (x != 0.0).then_some((sign, ln))
}

/// `(sign, ln |S_n|)`, or `None` when `S_n = 0` (only `n = 1`).
type SignedLog = Option<(f64, f64)>;

static INNER: RwLock<Vec<SignedLog>> = RwLock::new(Vec::new());

/// `S_n (2n-1)! = sum_k (-1)^k (2k-1) C(2n-1, n-k) ln k`, grouped into
/// exact integer multiples of prime logarithms and summed at `2n + 128`
/// bits; the binomials are about `4^n` while the sum is far smaller.
fn inner_sum_log_uncached(n: usize, logs: &[(u64, BigFloat)], bits: usize, ln_fact: f64) -> SignedLog {
    let row = binomial_row(2 * n as u64 - 1);
    let mut exps = vec![IBig::ZERO; logs.len()];
    for k in 2..=n as u64 {
        let c = IBig::from(row[n - k as usize].clone()) * IBig::from(2 * k - 1);
        let mut rest = k;
        for (i, (p, _)) in logs.iter().enumerate() {
            if rest == 1 {
                break;
            }
            let v = valuation(rest, *p);
            if v > 0 {
                rest /= p.pow(v);
                let add = &c * IBig::from(v);
                if k % 2 == 0 {
                    exps[i] += add;
                } else {
                    exps[i] -= add;
                }
            }
        }
    }
    let mut acc = hp::zero(bits);
    for ((_, lp), e) in logs.iter().zip(exps) {
        if e != IBig::ZERO {
            acc += lp * BigFloat::from(e).with_precision(bits).value();
        }
    }
    let (sign, ln) = hp::signed_log(&acc)?;
    Some((sign, ln - ln_fact))
}

/// Cached `(sign, ln |S_n|)` for `n = 1..=count`, index `n - 1`.
pub fn lambda_inner_sum_logs(count: usize) -> Vec<SignedLog> {
    {
        let t = INNER.read().unwrap();
        if t.len() >= count {
            return t[..count].to_vec();
        }
    }
    let mut t = INNER.write().unwrap();
    if t.len() < count {
        let target = count.next_power_of_two().max(32);
        let bits = 2 * target + 128;
        let logs = hp::prime_logs(target as u64, bits);
        let ln_fact = hp::ln_factorials(2 * target as u64, 128);
        for n in t.len() + 1..=target {
            let lf = hp::to_f64(&ln_fact[2 * n - 1]);
            t.push(inner_sum_log_uncached(n, &logs, bits, lf));
        }
    }
    t[..count].to_vec()
}

/// `S_n` as a double (underflows to zero for large `n`; the series itself
/// works from the logarithm).
pub fn lambda_inner_sum(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("the inner sum starts at n = 1".into()));
    }
    Ok(match lambda_inner_sum_logs(n)[n - 1] {
        Some((s, l)) => s * l.exp(),
        None => 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaTerm {
    pub n: usize,
    /// `Γ(x+n)/Γ(x+1-n)`; may overflow to infinity even when the term
    /// does not.
    pub gamma_ratio: f64,
    pub inner_sum: f64,
    pub term: f64,
}

/// Term `n` of the `ln Λ` series, assembled in the log domain.
fn term_value(x: f64, n: usize, inner: SignedLog) -> f64 {
    match (rising_ratio_log(x, n), inner) {
        (Some((s1, l1)), Some((s2, l2))) => {
            let sign = if n % 2 == 0 { s1 * s2 } else { -s1 * s2 };
            sign * (l1 + l2 - ((2 * n - 1) as f64).ln()).exp()
        }
        _ => 0.0,
    }
}

/// The first `count` terms at `x`, with their factors.
pub fn lambda_terms(x: f64, count: usize) -> Result<Vec<LambdaTerm>> {
    if !x.is_finite() {
        return Err(Error::Argument(format!("non-finite argument {x}")));
    }
    let inner = lambda_inner_sum_logs(count);
    Ok(inner
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let n = i + 1;
            LambdaTerm {
                n,
                gamma_ratio: rising_ratio(x, n),
                inner_sum: s.map_or(0.0, |(sg, l)| sg * l.exp()),
                term: term_value(x, n, s),
            }
        })
        .collect())
}

/// `ln Λ(x)`. At an integer `x = ±m` only the first `m` terms are nonzero.
pub fn lambda_log(x: f64, policy: &TruncationPolicy) -> Result<EvalReport> {
    if !x.is_finite() {
        return Err(Error::Argument(format!("non-finite argument {x}")));
    }
    let exact_len = (x.fract() == 0.0 && x.abs() < 1e9).then_some(x.abs() as usize);
    let count = exact_len.unwrap_or(usize::MAX).min(policy.max_terms);
    let inner = lambda_inner_sum_logs(count);
    let terms = inner.into_iter().enumerate().map(|(i, s)| term_value(x, i + 1, s));
    Ok(sum_series(policy, exact_len, terms, Exhaustion::Complete))
}

/// `Λ(x) = exp(ln Λ(x))`; `error_estimate` is converted to units of Λ.
pub fn lambda(x: f64, policy: &TruncationPolicy) -> Result<EvalReport> {
    let mut r = lambda_log(x, policy)?.map_value(f64::exp);
    r.error_estimate = r.value * r.error_estimate.exp_m1();
    Ok(r)
}

/// `|x|^(2n-1)/(2n-1) 2^(n-2) n(n+3)/(n-1)!`, the majorant used for the
/// ratio test.
pub fn lambda_term_bound(x: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("the bound starts at n = 1".into()));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let ln_fact: f64 = (1..n).map(|k| (k as f64).ln()).sum();
    let ln = (2.0 * nf - 1.0) * x.abs().ln() - (2.0 * nf - 1.0).ln() + (nf - 2.0) * std::f64::consts::LN_2
        + (nf * (nf + 3.0)).ln()
        - ln_fact;
    Ok(ln.exp())
}

/// `bound(n+1)/bound(n) = 2(n+1)(n+4)(2n-1) x^2 / (n^2 (n+3)(2n+1))`.
pub fn lambda_bound_ratio(x: f64, n: usize) -> f64 {
    let n = n as f64;
    2.0 * (n + 1.0) * (n + 4.0) * (2.0 * n - 1.0) * x * x / (n * n * (n + 3.0) * (2.0 * n + 1.0))
}
