//! Newton interpolation: forward differences on the unit-spaced nodes
//! `0, 1, 2, ...`, divided differences on arbitrary nodes, evaluation of the
//! resulting Newton forms, and the truncated-summation machinery every
//! infinite series in the crate runs through.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::hp::{self, BigFloat};

/// Stopping rule for an infinite series.
///
/// Summation stops after `consecutive_small` successive terms with
/// magnitude below `abs_tol`, or after `max_terms` terms, whichever comes
/// first. Series that are known to terminate are summed to their end.
/// `keep_partial_sums` asks evaluators to record every partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub consecutive_small: usize,
    #[serde(default)]
    pub keep_partial_sums: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 10_000,
            abs_tol: 1e-12,
            consecutive_small: 3,
            keep_partial_sums: false,
        }
    }
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, abs_tol: f64, consecutive_small: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Argument("max_terms must be at least 1".into()));
        }
        if !(abs_tol >= 0.0) {
            return Err(Error::Argument(format!("abs_tol must be non-negative, got {abs_tol}")));
        }
        if consecutive_small == 0 {
            return Err(Error::Argument("consecutive_small must be at least 1".into()));
        }
        Ok(TruncationPolicy {
            max_terms,
            abs_tol,
            consecutive_small,
            keep_partial_sums: false,
        })
    }

    /// Same tolerances, different term cap.
    pub fn with_max_terms(self, max_terms: usize) -> Self {
        TruncationPolicy {
            max_terms: max_terms.max(1),
            ..self
        }
    }

    /// A policy that only stops at the term cap.
    pub fn fixed_terms(max_terms: usize) -> Self {
        TruncationPolicy {
            max_terms: max_terms.max(1),
            abs_tol: 0.0,
            consecutive_small: 1,
            keep_partial_sums: false,
        }
    }

    pub fn with_partial_sums(self, keep: bool) -> Self {
        TruncationPolicy {
            keep_partial_sums: keep,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Tolerance,
    MaxTerms,
    ExactTermination,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Tolerance => "tolerance",
            StopReason::MaxTerms => "max_terms",
            StopReason::ExactTermination => "exact_termination",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a truncated series evaluation.
///
/// `error_estimate` is the magnitude of the last retained term, or zero
/// when the series terminated exactly. `exact` carries the exact rational
/// value when every term was rational and the series terminated.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub value: f64,
    pub exact: Option<Rational>,
    pub terms_used: usize,
    pub stop_reason: StopReason,
    pub partial_sums: Option<Vec<f64>>,
    pub last_term: f64,
    pub error_estimate: f64,
}

impl EvalReport {
    /// Whether summation stopped for a reason other than the term cap.
    pub fn converged(&self) -> bool {
        self.stop_reason != StopReason::MaxTerms
    }

    /// Applies `f` to the value and to every retained partial sum.
    /// The exact value is dropped; use [`EvalReport::map_exact`] when the
    /// transformation stays rational.
    pub fn map_value(mut self, f: impl Fn(f64) -> f64) -> Self {
        self.value = f(self.value);
        if let Some(ps) = self.partial_sums.as_mut() {
            ps.iter_mut().for_each(|s| *s = f(*s));
        }
        self.exact = None;
        self
    }

    pub fn map_exact(mut self, f: impl Fn(&Rational) -> Rational, g: impl Fn(f64) -> f64) -> Self {
        let exact = self.exact.take().map(|e| f(&e));
        self = self.map_value(g);
        if let Some(e) = exact {
            self.value = e.to_f64();
            self.exact = Some(e);
        }
        self
    }
}

/// Neumaier-compensated running sum with the stopping rule attached.
pub struct SeriesSum {
    policy: TruncationPolicy,
    sum: f64,
    compensation: f64,
    exact: Option<Rational>,
    terms_used: usize,
    small_run: usize,
    last_term: f64,
    partial_sums: Option<Vec<f64>>,
}

impl SeriesSum {
    pub fn new(policy: &TruncationPolicy) -> Self {
        SeriesSum {
            policy: *policy,
            sum: 0.0,
            compensation: 0.0,
            exact: None,
            terms_used: 0,
            small_run: 0,
            last_term: 0.0,
            partial_sums: policy.keep_partial_sums.then(Vec::new),
        }
    }

    /// Starts the running sum at `value` without counting it as a term.
    pub fn with_offset(mut self, value: f64) -> Self {
        self.sum = value;
        self
    }

    pub fn terms_used(&self) -> usize {
        self.terms_used
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Adds one term; true once the tolerance rule is satisfied.
    pub fn push(&mut self, term: f64) -> bool {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
        self.terms_used += 1;
        self.last_term = term;
        if let Some(ps) = self.partial_sums.as_mut() {
            ps.push(self.sum + self.compensation);
        }
        if term.abs() < self.policy.abs_tol {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= self.policy.consecutive_small
    }

    /// Adds an exact term, keeping an exact running sum alongside.
    pub fn push_exact(&mut self, term: Rational) -> bool {
        let f = term.to_f64();
        let acc = self.exact.take().unwrap_or(Rational::ZERO);
        self.exact = Some(acc + term);
        self.push(f)
    }

    pub fn finish(self, stop_reason: StopReason) -> EvalReport {
        let exact = match stop_reason {
            StopReason::ExactTermination => self.exact.or_else(|| (self.terms_used == 0).then_some(Rational::ZERO)),
            _ => None,
        };
        let value = match &exact {
            Some(e) if self.terms_used > 0 => e.to_f64(),
            _ => self.sum + self.compensation,
        };
        let error_estimate = match stop_reason {
            StopReason::ExactTermination => 0.0,
            _ => self.last_term.abs(),
        };
        EvalReport {
            value,
            exact,
            terms_used: self.terms_used,
            stop_reason,
            partial_sums: self.partial_sums,
            last_term: self.last_term,
            error_estimate,
        }
    }
}

/// How a term stream ended, when it ends before the policy stops it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhaustion {
    /// The stream is the whole series.
    Complete,
    /// The stream hit an implementation limit on the number of terms.
    Capped,
}

/// Sums `terms` under `policy`.
///
/// `exact_len = Some(m)` declares that only the first `m` terms can be
/// nonzero; those are summed without tolerance checks and the report says
/// `exact_termination`.
pub fn sum_series(
    policy: &TruncationPolicy,
    exact_len: Option<usize>,
    terms: impl IntoIterator<Item = f64>,
    exhaustion: Exhaustion,
) -> EvalReport {
    let acc = SeriesSum::new(policy);
    drive(acc, policy, exact_len, terms, exhaustion, SeriesSum::push)
}

/// Like [`sum_series`] over exact terms; the report carries the exact sum
/// when the series terminates.
pub fn sum_series_exact(
    policy: &TruncationPolicy,
    exact_len: Option<usize>,
    terms: impl IntoIterator<Item = Rational>,
    exhaustion: Exhaustion,
) -> EvalReport {
    let acc = SeriesSum::new(policy);
    drive(acc, policy, exact_len, terms, exhaustion, SeriesSum::push_exact)
}

fn drive<T>(
    mut acc: SeriesSum,
    policy: &TruncationPolicy,
    exact_len: Option<usize>,
    terms: impl IntoIterator<Item = T>,
    exhaustion: Exhaustion,
    push: impl Fn(&mut SeriesSum, T) -> bool,
) -> EvalReport {
    let limit = exact_len.map_or(policy.max_terms, |m| m.min(policy.max_terms));
    if limit == 0 {
        return acc.finish(StopReason::ExactTermination);
    }
    for term in terms {
        let small = push(&mut acc, term);
        if exact_len.is_none() && small {
            return acc.finish(StopReason::Tolerance);
        }
        if acc.terms_used() >= limit {
            break;
        }
    }
    let used = acc.terms_used();
    let reason = match exact_len {
        Some(m) if used == m => StopReason::ExactTermination,
        _ if used >= policy.max_terms => StopReason::MaxTerms,
        _ => match exhaustion {
            Exhaustion::Complete => StopReason::ExactTermination,
            Exhaustion::Capped => StopReason::MaxTerms,
        },
    };
    acc.finish(reason)
}

/// A real argument given either exactly or as a double.
#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Exact(Rational),
    Float(f64),
}

impl Arg {
    pub fn to_f64(&self) -> f64 {
        match self {
            Arg::Exact(r) => r.to_f64(),
            Arg::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Arg::Exact(r) => Some(r),
            Arg::Float(_) => None,
        }
    }

    /// `Some(m)` when the argument is the non-negative integer `m`.
    pub fn nonneg_integer(&self) -> Option<u64> {
        match self {
            Arg::Exact(r) => r.to_nonneg_integer(),
            Arg::Float(x) => (*x >= 0.0 && x.fract() == 0.0 && *x < 9.0e15).then_some(*x as u64),
        }
    }
}

impl From<f64> for Arg {
    fn from(x: f64) -> Self {
        Arg::Float(x)
    }
}

impl From<Rational> for Arg {
    fn from(r: Rational) -> Self {
        Arg::Exact(r)
    }
}

/// Integers and `p/q` parse as exact values, anything else as a double.
impl FromStr for Arg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let looks_exact = !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || "+-/ ".contains(c));
        if looks_exact {
            return t.parse::<Rational>().map(Arg::Exact);
        }
        let x: f64 = t
            .parse()
            .map_err(|_| Error::Argument(format!("not a number: {s:?}")))?;
        if !x.is_finite() {
            return Err(Error::Argument(format!("non-finite argument: {s:?}")));
        }
        Ok(Arg::Float(x))
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Exact(r) => write!(f, "{r}"),
            Arg::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    ForwardDifference,
    DividedDifference,
    Taylor,
}

/// A list of exact or floating values.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Exact(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_f64(&self, i: usize) -> f64 {
        match self {
            Values::Exact(v) => v[i].to_f64(),
            Values::Float(v) => v[i],
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get_f64(i)).collect()
    }
}

/// Coefficients of a Newton (or power) series, indexed from zero.
///
/// Divided-difference tables also carry their nodes, pairwise distinct and
/// as many as there are entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub kind: TableKind,
    pub entries: Values,
    pub nodes: Option<Values>,
}

impl CoefficientTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Newton forward-difference coefficients of `f` sampled at `0, 1, ..., N`.
///
/// `entries[n] = (-1)^n sum_k (-1)^k C(n,k) f(k)`, the coefficient of
/// `C(x, n)` in the interpolating series.
pub fn forward_difference_coeffs(values: &[Rational]) -> Result<CoefficientTable> {
    if values.is_empty() {
        return Err(Error::Argument("forward differences of an empty sample".into()));
    }
    let mut row = values.to_vec();
    let mut entries = Vec::with_capacity(values.len());
    entries.push(row[0].clone());
    while row.len() > 1 {
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        entries.push(row[0].clone());
    }
    Ok(CoefficientTable {
        kind: TableKind::ForwardDifference,
        entries: Values::Exact(entries),
        nodes: None,
    })
}

fn check_distinct<T: PartialEq>(nodes: &[T], len: usize) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::Argument("divided differences need at least one node".into()));
    }
    if nodes.len() != len {
        return Err(Error::Argument(format!(
            "{} nodes but {} values",
            nodes.len(),
            len
        )));
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[i + 1..].iter().any(|b| a == b) {
            return Err(Error::Argument(format!("duplicate node at index {i}")));
        }
    }
    Ok(())
}

/// Divided-difference table at `bits` of working precision.
pub fn divided_differences_hp(nodes: &[BigFloat], values: &[BigFloat], bits: usize) -> Result<Vec<BigFloat>> {
    check_distinct(nodes, values.len())?;
    let nodes: Vec<BigFloat> = nodes.iter().map(|x| x.clone().with_precision(bits).value()).collect();
    let mut coef: Vec<BigFloat> = values.iter().map(|v| v.clone().with_precision(bits).value()).collect();
    let n = coef.len();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &nodes[i] - &nodes[i - j];
            coef[i] = num / den;
        }
    }
    Ok(coef)
}

/// Divided differences `f[x_0, ..., x_n]` for every `n`, computed with
/// `precision_digits` significant decimal digits and rounded to doubles.
///
/// Nodes must be pairwise distinct; their order only changes which
/// interpolant prefixes the entries describe.
pub fn divided_difference_coeffs(nodes: &[f64], values: &[f64], precision_digits: usize) -> Result<CoefficientTable> {
    if nodes.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::Argument("non-finite node or value".into()));
    }
    let bits = hp::digits_to_bits(precision_digits.max(1));
    let hp_nodes: Vec<BigFloat> = nodes.iter().map(|&x| hp::from_f64(x, bits)).collect();
    let hp_values: Vec<BigFloat> = values.iter().map(|&v| hp::from_f64(v, bits)).collect();
    let coef = divided_differences_hp(&hp_nodes, &hp_values, bits)?;
    Ok(CoefficientTable {
        kind: TableKind::DividedDifference,
        entries: Values::Float(coef.iter().map(hp::to_f64).collect()),
        nodes: Some(Values::Float(nodes.to_vec())),
    })
}

/// Exact divided differences over rational nodes.
pub fn divided_difference_exact(nodes: &[Rational], values: &[Rational]) -> Result<CoefficientTable> {
    check_distinct(nodes, values.len())?;
    let mut coef = values.to_vec();
    let n = coef.len();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&nodes[i] - &nodes[i - j]);
        }
    }
    Ok(CoefficientTable {
        kind: TableKind::DividedDifference,
        entries: Values::Exact(coef),
        nodes: Some(Values::Exact(nodes.to_vec())),
    })
}

/// Evaluates `sum_n entries[n] C(x, n)`.
///
/// Exact tables at exact arguments are summed in rational arithmetic. At a
/// non-negative integer `x = m` the series ends after `m + 1` terms.
pub fn eval_newton_unit(coeffs: &CoefficientTable, x: &Arg, policy: &TruncationPolicy) -> Result<EvalReport> {
    if coeffs.kind != TableKind::ForwardDifference {
        return Err(Error::Argument(format!("expected a forward-difference table, got {:?}", coeffs.kind)));
    }
    let exact_len = x.nonneg_integer().map(|m| m as usize + 1);
    match (&coeffs.entries, x) {
        (Values::Exact(entries), Arg::Exact(xr)) => {
            let mut binom = Rational::ONE;
            let terms = entries.iter().enumerate().map(move |(n, c)| {
                let t = c * &binom;
                binom = &binom * (xr - Rational::from(n)) / Rational::from(n + 1);
                t
            });
            Ok(sum_series_exact(policy, exact_len, terms, Exhaustion::Complete))
        }
        (entries, _) => {
            let xf = x.to_f64();
            let mut binom = 1.0;
            let terms = (0..entries.len()).map(move |n| {
                let t = entries.get_f64(n) * binom;
                binom *= (xf - n as f64) / (n as f64 + 1.0);
                t
            });
            Ok(sum_series(policy, exact_len, terms, Exhaustion::Complete))
        }
    }
}

/// Evaluates the Newton form `sum_n entries[n] prod_{i<n} (x - nodes[i])`.
pub fn eval_newton_nodes(coeffs: &CoefficientTable, x: &Arg, policy: &TruncationPolicy) -> Result<EvalReport> {
    if coeffs.kind != TableKind::DividedDifference {
        return Err(Error::Argument(format!("expected a divided-difference table, got {:?}", coeffs.kind)));
    }
    let nodes = coeffs
        .nodes
        .as_ref()
        .ok_or_else(|| Error::Argument("divided-difference table without nodes".into()))?;
    match (&coeffs.entries, nodes, x) {
        (Values::Exact(entries), Values::Exact(nodes), Arg::Exact(xr)) => {
            let exact_len = nodes.iter().position(|t| t == xr).map(|i| i + 1);
            let mut prod = Rational::ONE;
            let terms = entries.iter().enumerate().map(move |(n, c)| {
                let t = c * &prod;
                prod *= xr - &nodes[n];
                t
            });
            Ok(sum_series_exact(policy, exact_len, terms, Exhaustion::Complete))
        }
        (entries, nodes, _) => {
            let xf = x.to_f64();
            let exact_len = (0..nodes.len()).position(|i| nodes.get_f64(i) == xf).map(|i| i + 1);
            let mut prod = 1.0;
            let terms = (0..entries.len()).map(move |n| {
                let t = entries.get_f64(n) * prod;
                prod *= xf - nodes.get_f64(n);
                t
            });
            Ok(sum_series(policy, exact_len, terms, Exhaustion::Complete))
        }
    }
}
