//! A Newton series for the principal branch of the inverse gamma function
//! on the nodes `ln 1!, ln 2!, ...`:
//!
//! `Γ̃(x) = 2 + sum_{n>=0} c_n prod_{i=1..n} ln(x/i!)`, with
//! `c_n = sum_{k=0..n} k / (prod_{i=1..k} ln((k+1)!/i!) prod_{i=1..n-k} ln((k+1)!/(k+1+i)!))`.
//!
//! The closed form is conjectural (as is convergence on `(Γ(α), ∞)`); the
//! divided-difference and root-finding oracles here exist to test it.

use std::sync::RwLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, Rational};
use crate::hp::{self, BigFloat};
use crate::newton::{divided_difference_exact, divided_differences_hp, sum_series, EvalReport, Exhaustion, TruncationPolicy, Values};
use crate::refgamma::{digamma_ref, gamma_ref};

/// Most coefficients the series ever uses; past this it reports
/// `max_terms`.
pub const INV_COEFF_CAP: usize = 1024;

/// Working precision used by [`inv_gamma_series`] for a table of `len`
/// coefficients. The closed form loses about `0.19 n` decimal digits to
/// cancellation at order `n`.
pub fn table_digits(len: usize) -> usize {
    60 + len / 3
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvGammaCoeff {
    pub n: usize,
    pub value: f64,
    /// `(k, contribution k)`; the `k = 0` entry is always zero.
    pub closed_form_terms: Vec<(usize, f64)>,
}

/// `c_n` from the closed form at `precision_digits` significant digits.
pub fn inv_coeff(n: usize, precision_digits: usize) -> InvGammaCoeff {
    let bits = hp::digits_to_bits(precision_digits.max(1));
    let lf = hp::ln_factorials(n as u64 + 1, bits);
    // lf[j] = ln j!
    let one = hp::from_int(1, bits);
    let mut total = hp::zero(bits);
    let mut closed_form_terms = Vec::with_capacity(n + 1);
    closed_form_terms.push((0, 0.0));
    for k in 1..=n {
        let mut prod = one.clone();
        for i in 1..=k {
            prod *= &lf[k + 1] - &lf[i];
        }
        for i in 1..=n - k {
            prod *= &lf[k + 1] - &lf[k + 1 + i];
        }
        let c = hp::from_int(k as u64, bits) / prod;
        closed_form_terms.push((k, hp::to_f64(&c)));
        total += c;
    }
    InvGammaCoeff {
        n,
        value: hp::to_f64(&total),
        closed_form_terms,
    }
}

/// `f[ln 1!, ..., ln (n+1)!]` for `f(ln k!) = k + 1`, by a divided
/// difference table at `precision_digits` digits.
///
/// For `n >= 1` this is the conjectured `c_n`; for `n = 0` it is the
/// constant 2 that the closed form carries outside the sum.
pub fn inv_coeff_oracle(n: usize, precision_digits: usize) -> f64 {
    let bits = hp::digits_to_bits(precision_digits.max(1));
    let lf = hp::ln_factorials(n as u64 + 1, bits);
    let nodes: Vec<BigFloat> = lf[1..].to_vec();
    let values: Vec<BigFloat> = (1..=n as u64 + 1).map(|k| hp::from_int(k + 1, bits)).collect();
    let table = divided_differences_hp(&nodes, &values, bits).expect("log-factorial nodes are distinct");
    hp::to_f64(&table[n])
}

/// `(sign, ln |c_n|)`, `None` for zero.
type SignedLog = Option<(f64, f64)>;

struct InvTable {
    coeffs: Vec<SignedLog>,
    /// `ln i!` rounded to doubles, `i = 0..=len`.
    ln_fact: Vec<f64>,
}

static TABLE: RwLock<Option<InvTable>> = RwLock::new(None);

/// All `c_0 ..< c_len` through the Lagrange form of the divided difference:
/// with `P_n(k)` the product in the closed form, `P_{n+1}(k) = P_n(k)
/// (ln (k+1)! - ln (n+2)!)`, so the whole table costs `O(len^2)`.
fn build_table(len: usize) -> InvTable {
    let bits = hp::digits_to_bits(table_digits(len));
    let lf = hp::ln_factorials(len as u64 + 1, bits);
    let mut coeffs = Vec::with_capacity(len);
    coeffs.push(None);
    // q[k] = k / P_n(k)
    let mut q: Vec<BigFloat> = vec![hp::zero(bits)];
    for n in 1..len {
        for (k, qk) in q.iter_mut().enumerate().skip(1) {
            *qk /= &lf[k + 1] - &lf[n + 1];
        }
        let mut prod = hp::from_int(1, bits);
        for i in 1..=n {
            prod *= &lf[n + 1] - &lf[i];
        }
        q.push(hp::from_int(n as u64, bits) / prod);
        let mut sum = hp::zero(bits);
        for qk in &q[1..] {
            sum += qk;
        }
        coeffs.push(hp::signed_log(&sum));
    }
    InvTable {
        coeffs,
        ln_fact: lf.iter().map(hp::to_f64).collect(),
    }
}

fn with_table<T>(len: usize, f: impl FnOnce(&InvTable) -> T) -> T {
    {
        let guard = TABLE.read().unwrap();
        if let Some(t) = guard.as_ref().filter(|t| t.coeffs.len() >= len) {
            return f(t);
        }
    }
    let mut guard = TABLE.write().unwrap();
    if guard.as_ref().is_none_or(|t| t.coeffs.len() < len) {
        let target = len.next_power_of_two().clamp(64, INV_COEFF_CAP.max(len));
        *guard = Some(build_table(target));
    }
    f(guard.as_ref().unwrap())
}

/// `c_0 ..< c_count` from the cached table, as doubles (tiny ones flush
/// to zero).
pub fn inv_coeffs_f64(count: usize) -> Vec<f64> {
    with_table(count, |t| {
        t.coeffs[..count]
            .iter()
            .map(|c| c.map_or(0.0, |(s, l)| s * l.exp()))
            .collect()
    })
}

/// `α`, the positive zero of `ψ`, and `Γ(α)`.
pub fn alpha() -> (f64, f64) {
    let a = alpha_in(1.0, 2.0).expect("ψ changes sign on [1, 2]");
    (a, gamma_ref(a).expect("α > 0"))
}

/// Bisection for the zero of `ψ` in `[lo, hi]`, to `1e-13`.
pub fn alpha_in(lo: f64, hi: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Argument(format!("bad bracket [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (digamma_ref(lo)?, digamma_ref(hi)?);
    if flo.signum() == fhi.signum() {
        return Err(Error::Argument(format!("ψ does not change sign on [{lo}, {hi}]")));
    }
    let rising = flo < 0.0;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if (digamma_ref(mid)? < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The `y >= α` with `Γ(y) = x`, by bisection on the reference gamma.
pub fn inv_gamma_oracle(x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let (a, ga) = alpha();
    if !(x >= ga) || !x.is_finite() {
        return Err(Error::domain("inv_gamma_oracle", x, "x >= Γ(α) ≈ 0.8856"));
    }
    let mut lo = a;
    let mut width = 1.0;
    let mut hi = a + width;
    while gamma_ref(hi)? < x {
        lo = hi;
        width *= 2.0;
        hi = a + width;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if gamma_ref(mid)? < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `2 + sum_n c_n prod_{i<=n} ln(x/i!)` for `x > Γ(α)`.
///
/// At `x = m!` the factor `ln(x/m!)` vanishes and the series stops after
/// `m` terms. Terms are assembled from logarithms because the products
/// and the coefficients leave the double range long before the terms do.
pub fn inv_gamma_series(x: f64, policy: &TruncationPolicy) -> Result<EvalReport> {
    let (_, ga) = alpha();
    if !(x > ga) || !x.is_finite() {
        return Err(Error::domain("inv_gamma_series", x, "x > Γ(α) ≈ 0.8856 (conjectured region)"));
    }
    let node = (1..=22u64).find(|&m| factorial(m).to_f64().value() == x);
    let exact_len = node.map(|m| m as usize);
    let wanted = exact_len.unwrap_or(usize::MAX).min(policy.max_terms);
    let count = wanted.min(INV_COEFF_CAP);
    let exhaustion = if count < wanted { Exhaustion::Capped } else { Exhaustion::Complete };
    let lx = x.ln();
    let report = with_table(count, |t| {
        let mut sign = 1.0;
        let mut ln_prod = 0.0;
        let mut zero = false;
        let terms = (0..count).map(|n| {
            if n > 0 {
                let f = lx - t.ln_fact[n];
                if f == 0.0 {
                    zero = true;
                } else {
                    sign *= f.signum();
                    ln_prod += f.abs().ln();
                }
            }
            match t.coeffs[n] {
                Some((s, l)) if !zero => sign * s * (l + ln_prod).exp(),
                _ => 0.0,
            }
        });
        sum_series(policy, exact_len, terms, exhaustion)
    });
    Ok(report.map_value(|s| s + 2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceDemo {
    /// `a_1, a_2, ...` of the series on the nodes `1!, 2!, 3!, ...`.
    pub coefficients: Vec<Rational>,
    pub x: f64,
    /// `|a_k prod_{i<k} (x - i!)|`.
    pub term_magnitudes: Vec<f64>,
    pub partial_sums: Vec<f64>,
}

/// The Newton series for `Γ̃` on factorial nodes, with its rational
/// coefficients. It interpolates at every `k!` yet does not represent `Γ̃`
/// between them: at `x = 3` the partial sums settle near 3.6555 rather
/// than 3.4059, and for large `x` the terms first climb past `1e12`.
pub fn divergence_demo(count: usize, x: f64) -> Result<DivergenceDemo> {
    if count < 4 {
        return Err(Error::Argument(format!("the demonstration needs at least 4 terms, got {count}")));
    }
    if !x.is_finite() {
        return Err(Error::Argument(format!("non-finite sample point {x}")));
    }
    let nodes: Vec<Rational> = (1..=count as u64).map(|k| Rational::from(factorial(k))).collect();
    let values: Vec<Rational> = (1..=count as u64).map(|k| Rational::from(k + 1)).collect();
    let table = divided_difference_exact(&nodes, &values)?;
    let coefficients = match table.entries {
        Values::Exact(v) => v,
        Values::Float(_) => unreachable!("exact table"),
    };
    // the products overflow doubles long before the terms do, so stay exact
    let xr = Rational::from_f64(x).expect("finite");
    let mut prod = Rational::ONE;
    let mut acc = 0.0;
    let mut term_magnitudes = Vec::with_capacity(count);
    let mut partial_sums = Vec::with_capacity(count);
    for (a, node) in coefficients.iter().zip(&nodes) {
        let t = (a * &prod).to_f64();
        term_magnitudes.push(t.abs());
        acc += t;
        partial_sums.push(acc);
        prod *= &xr - node;
    }
    Ok(DivergenceDemo {
        coefficients,
        x,
        term_magnitudes,
        partial_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::StopReason;

    #[test]
    fn closed_form_examples() {
        let ln2 = std::f64::consts::LN_2;
        let (ln3, ln6) = (3f64.ln(), 6f64.ln());
        assert_eq!(inv_coeff(0, 50).value, 0.0);
        assert!((inv_coeff(1, 50).value - 1.0 / ln2).abs() < 1e-15);
        let c2 = inv_coeff(2, 50);
        let expected = 2.0 / (ln6 * ln3) - 1.0 / (ln2 * ln3);
        assert!((c2.value - expected).abs() < 1e-15);
        assert!((c2.value + 0.29716).abs() < 1e-5);
        assert_eq!(c2.closed_form_terms[0], (0, 0.0));
        let sum: f64 = c2.closed_form_terms.iter().map(|t| t.1).sum();
        assert!((sum - c2.value).abs() < 1e-15);
    }

    #[test]
    fn oracle_examples() {
        let ln2 = std::f64::consts::LN_2;
        let (ln3, ln6) = (3f64.ln(), 6f64.ln());
        assert_eq!(inv_coeff_oracle(0, 50), 2.0);
        assert!((inv_coeff_oracle(1, 50) - 1.0 / ln2).abs() < 1e-15);
        let expected = (ln2 - ln3) / (ln2 * ln3 * ln6);
        assert!((inv_coeff_oracle(2, 50) - expected).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_divided_differences() {
        for n in 1..=12 {
            let a = inv_coeff(n, 200).value;
            let b = inv_coeff_oracle(n, 200);
            assert!((a - b).abs() <= 1e-9, "n = {n}");
            // far tighter in practice
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1e-300), "n = {n}");
        }
    }

    #[test]
    fn cached_table_matches_direct_closed_form() {
        let table = inv_coeffs_f64(40);
        assert_eq!(table[0], 0.0);
        for n in [1, 2, 5, 12, 25, 39] {
            let direct = inv_coeff(n, 120).value;
            assert!((table[n] - direct).abs() <= 1e-13 * direct.abs(), "n = {n}");
        }
        assert!((table[12] + 9.045_495_186_917_04e-12).abs() < 1e-24);
    }

    #[test]
    fn alpha_value() {
        let (a, ga) = alpha();
        assert!((a - 1.461_632_144_968_362).abs() < 1e-12);
        assert!((ga - 0.885_603_194_410_888_7).abs() < 1e-12);
        assert!(alpha_in(2.0, 3.0).is_err());
        let b = alpha_in(0.9, 2.7).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn oracle_inverts_gamma() {
        let tol = 1e-13;
        assert!((inv_gamma_oracle(1.0, tol).unwrap() - 2.0).abs() < 1e-12);
        assert!((inv_gamma_oracle(24.0, tol).unwrap() - 5.0).abs() < 1e-12);
        assert!((inv_gamma_oracle(3.0, tol).unwrap() - 3.405_869_986).abs() < 1e-9);
        let ys: Vec<f64> = [1.0, 2.0, 6.0, 24.0, 120.0]
            .iter()
            .map(|&x| inv_gamma_oracle(x, tol).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[1] > w[0]));
        assert!(inv_gamma_oracle(0.5, tol).is_err());
        assert!(inv_gamma_oracle(3.0, 0.0).is_err());
        assert!(inv_gamma_oracle(1e300, tol).unwrap() > 160.0);
    }

    #[test]
    fn series_is_exact_at_factorial_nodes() {
        let p = TruncationPolicy::default();
        let r = inv_gamma_series(1.0, &p).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.terms_used, 1);
        for m in 2..=5u64 {
            let x = factorial(m).to_f64().value();
            let r = inv_gamma_series(x, &p).unwrap();
            assert!((r.value - (m + 1) as f64).abs() < 1e-12, "m = {m}: {}", r.value);
            assert_eq!(r.stop_reason, StopReason::ExactTermination);
            assert!(r.terms_used <= m as usize);
        }
        assert!(inv_gamma_series(0.8, &p).is_err());
    }

    #[test]
    fn series_near_three() {
        let r = inv_gamma_series(3.0, &TruncationPolicy::fixed_terms(60)).unwrap();
        assert!((r.value - 3.405_869_986).abs() < 5e-3);
    }

    #[test]
    fn naive_series_coefficients() {
        let d = divergence_demo(6, 3.0).unwrap();
        let expected: Vec<Rational> = ["2", "1", "-3/20", "559/91080"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(&d.coefficients[..4], expected.as_slice());
        assert!(divergence_demo(3, 3.0).is_err());
        // interpolating at the nodes, wrong in between
        let d = divergence_demo(40, 3.0).unwrap();
        let tail = *d.partial_sums.last().unwrap();
        assert!(tail.is_finite());
        assert!((tail - inv_gamma_oracle(3.0, 1e-12).unwrap()).abs() > 0.2);
        let d = divergence_demo(40, 1e4).unwrap();
        assert!(d.term_magnitudes.iter().cloned().fold(0.0, f64::max) > 1e12);
    }
}
