//! Two series for the Euler–Mascheroni constant with rational terms:
//!
//! - `-γ = sum_{n>=1} L_n(1)/n`
//! - `γ = -1 + sum_{n>=2} (n-2)! sum_{k=1..n} (-1)^(1+k) / ((n-k)! k^k)`
//!
//! The inner sum of the second is `-c_n / (n(n-1))` with `c_n` the
//! coefficient of the `x^(x-1)` Newton series, so both series share the
//! exact tables in [`crate::gammafuncs`].

use std::fmt;
use std::str::FromStr;

use dashu_int::{IBig, UBig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, laguerre_at_one, laguerre_at_one_scaled, Rational};
use crate::gammafuncs::{gamma_inner_coeff, gamma_inner_scaled, laguerre_at_one_f64};
use crate::refgamma::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaSeries {
    Laguerre,
    Kk,
}

impl FromStr for GammaSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "laguerre" => Ok(GammaSeries::Laguerre),
            "kk" => Ok(GammaSeries::Kk),
            _ => Err(Error::Argument(format!("unknown series {s:?} (laguerre or kk)"))),
        }
    }
}

impl fmt::Display for GammaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaSeries::Laguerre => "laguerre",
            GammaSeries::Kk => "kk",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSeriesTerm {
    pub index: usize,
    pub term: Rational,
    pub partial_sum: Rational,
}

/// Terms `L_n(1)/n` for `n = 1..=count`; the partial sums tend to `-γ`.
pub fn gamma_terms_laguerre(count: usize) -> Result<Vec<GammaSeriesTerm>> {
    if count == 0 {
        return Err(Error::Argument("the Laguerre series starts at n = 1".into()));
    }
    let mut acc = Rational::ZERO;
    Ok((1..=count)
        .map(|n| {
            let term = laguerre_at_one(n) / Rational::from(n);
            acc += &term;
            GammaSeriesTerm {
                index: n,
                term,
                partial_sum: acc.clone(),
            }
        })
        .collect())
}

/// Term `n >= 2` of the rational series, `-c_n / (n(n-1))`.
pub fn kk_term(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Argument(format!("the series starts at n = 2, got {n}")));
    }
    Ok(-gamma_inner_coeff(n)? / Rational::from(n * (n - 1)))
}

/// Terms for `n = 2..=last`; partial sums start from `-1` and tend to `γ`.
pub fn gamma_terms_kk(last: usize) -> Result<Vec<GammaSeriesTerm>> {
    if last < 2 {
        return Err(Error::Argument(format!("the series starts at n = 2, got N = {last}")));
    }
    let mut acc = -Rational::ONE;
    (2..=last)
        .map(|n| {
            let term = kk_term(n)?;
            acc += &term;
            Ok(GammaSeriesTerm {
                index: n,
                term,
                partial_sum: acc.clone(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OeisSequence {
    /// Numerators of the terms of the rational γ series.
    A360092,
    /// Their denominators.
    A360091,
}

impl FromStr for OeisSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A360092" => Ok(OeisSequence::A360092),
            "A360091" => Ok(OeisSequence::A360091),
            _ => Err(Error::Argument(format!("unknown sequence {s:?} (A360092 or A360091)"))),
        }
    }
}

impl fmt::Display for OeisSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// First `count` numerators or denominators of the terms, in lowest terms,
/// starting from `n = 2`.
pub fn oeis_terms(which: OeisSequence, count: usize) -> Result<Vec<IBig>> {
    if count == 0 {
        return Err(Error::Argument("count must be at least 1".into()));
    }
    (2..count + 2)
        .map(|n| {
            let t = kk_term(n)?;
            Ok(match which {
                OeisSequence::A360092 => t.numerator().clone(),
                OeisSequence::A360091 => IBig::from(t.denominator().clone()),
            })
        })
        .collect()
}

/// OEIS b-file body: `"n value"` per line, `n` counted from 1.
pub fn format_bfile(values: &[IBig]) -> String {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{} {}\n", i + 1, v))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaEstimate {
    pub series: GammaSeries,
    pub terms: usize,
    /// The exact partial sum, oriented so that it tends to `γ`.
    pub partial_sum: Rational,
    pub value: f64,
    /// `value - γ`.
    pub error: f64,
}

fn lcm_up_to(n: u64) -> UBig {
    crate::exactnum::primes_up_to(n).into_iter().fold(UBig::ONE, |acc, p| {
        let mut pk = p;
        while pk * p <= n {
            pk *= p;
        }
        acc * UBig::from(pk)
    })
}

/// Estimate of `γ` from the first terms of either series.
///
/// For `laguerre`, `last` counts terms `n = 1..=last`; for `kk` it is the
/// last index, terms `n = 2..=last`. The sum is exact, over one common
/// denominator, and rounded once.
pub fn estimate_gamma(series: GammaSeries, last: usize) -> Result<GammaEstimate> {
    let partial_sum = match series {
        GammaSeries::Laguerre => {
            if last == 0 {
                return Err(Error::Argument("the Laguerre series starts at n = 1".into()));
            }
            // -sum A_n / (n n!) over the denominator N! lcm(1..N)
            let nn = last as u64;
            let l = lcm_up_to(nn);
            let mut tail = UBig::ONE; // N!/n!
            let mut num = IBig::ZERO;
            for n in (1..=nn).rev() {
                num += laguerre_at_one_scaled(n as usize) * IBig::from(&tail * (&l / UBig::from(n)));
                tail *= UBig::from(n);
            }
            -Rational::new(num, IBig::from(factorial(nn) * l))
        }
        GammaSeries::Kk => {
            if last < 2 {
                return Err(Error::Argument(format!("the series starts at n = 2, got N = {last}")));
            }
            // -1 - sum c_n/(n(n-1)), c_n = S_n/D, over the denominator D lcm(1..N)
            let l = lcm_up_to(last as u64);
            let (scaled, den) = gamma_inner_scaled(last);
            let mut num = IBig::ZERO;
            for (i, s) in scaled.iter().enumerate().skip(1) {
                let n = i + 1;
                num += s * IBig::from(&l / UBig::from(n * (n - 1)));
            }
            -Rational::ONE - Rational::new(num, IBig::from(den * l))
        }
    };
    let value = partial_sum.to_f64();
    Ok(GammaEstimate {
        series,
        terms: last,
        partial_sum,
        value,
        error: value - EULER_GAMMA,
    })
}

/// Errors `-sum_{n<=k} L_n(1)/n - γ` for `k = 1..=count`, in double
/// precision.
pub fn laguerre_errors(count: usize) -> Vec<f64> {
    let lag = laguerre_at_one_f64(count + 1);
    let mut acc = 0.0;
    lag.iter()
        .enumerate()
        .skip(1)
        .map(|(n, l)| {
            acc -= l / n as f64;
            acc - EULER_GAMMA
        })
        .collect()
}

/// Largest `|error|` of the Laguerre partial sums over `N ..= 2N` terms.
/// The errors oscillate, so single partial sums are a poor measure.
pub fn laguerre_error_envelope(n: usize) -> f64 {
    let errs = laguerre_errors(2 * n.max(1));
    errs[n.max(1) - 1..].iter().fold(0.0, |m: f64, e| m.max(e.abs()))
}
