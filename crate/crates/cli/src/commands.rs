use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use gammaseries::eulerconst::{self, GammaSeries};
use gammaseries::gammafuncs::{self, TaylorApprox};
use gammaseries::invgamma;
use gammaseries::lambdafn;
use gammaseries::refgamma::{digamma_ref, gamma_ref, recip_gamma_ref};
use gammaseries::{Arg, EvalReport, TruncationPolicy};

use crate::output::{col, report_columns, write_records, Cell, Column, Fields, Format, OutputRecord, Source};
use crate::{Cli, Command, GammaMethod, EXIT_NONCONVERGENCE, EXIT_OK};

/// Bisection tolerance for the inverse gamma root finder.
const ORACLE_TOL: f64 = 1e-13;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(gammaseries::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<gammaseries::Error> for CliError {
    fn from(e: gammaseries::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CmdResult = Result<Outcome, CliError>;

pub struct Outcome {
    records: Vec<OutputRecord>,
    columns: Vec<Column>,
    /// Pre-formatted output that bypasses `--format` (b-files).
    raw: Option<String>,
    /// Set for commands driven by a truncation policy: a capped series
    /// whose error estimate exceeds this is reported as non-convergence.
    tol: Option<f64>,
}

impl Outcome {
    fn new(records: Vec<OutputRecord>, columns: Vec<Column>) -> Self {
        Outcome {
            records,
            columns,
            raw: None,
            tol: None,
        }
    }

    fn checked(mut self, policy: &TruncationPolicy) -> Self {
        self.tol = Some(policy.abs_tol);
        self
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<(), CliError> {
        match &self.raw {
            Some(s) => out.write_all(s.as_bytes())?,
            None => write_records(out, format, &self.records, &self.columns)?,
        }
        Ok(())
    }

    pub fn exit_code(&self) -> i32 {
        let Some(tol) = self.tol else { return EXIT_OK };
        let failed = self.records.iter().any(|r| {
            r.stop_reason == "max_terms"
                && match r.error_estimate {
                    Cell::Float(e) => !(e <= tol),
                    _ => false,
                }
        });
        if failed {
            EXIT_NONCONVERGENCE
        } else {
            EXIT_OK
        }
    }
}

fn value_cell(report: &EvalReport) -> Cell {
    match &report.exact {
        Some(r) => Cell::Exact(r.to_string()),
        None => Cell::Float(report.value),
    }
}

fn arg_cell(x: &Arg) -> Cell {
    match x {
        Arg::Exact(r) => Cell::Exact(r.to_string()),
        Arg::Float(v) => Cell::Float(*v),
    }
}

fn report_record(command: &str, inputs: Fields, report: &EvalReport, mut extra: Fields) -> OutputRecord {
    if let Some(ps) = &report.partial_sums {
        extra = extra.with("partial_sums", Cell::Floats(ps.clone()));
    }
    OutputRecord {
        command: command.into(),
        inputs,
        value: value_cell(report),
        terms_used: report.terms_used,
        stop_reason: report.stop_reason.to_string(),
        error_estimate: Cell::Float(report.error_estimate),
        extra,
    }
}

/// A record for something that is not a truncated series.
fn plain_record(command: &str, inputs: Fields, value: Cell, extra: Fields) -> OutputRecord {
    OutputRecord {
        command: command.into(),
        inputs,
        value,
        terms_used: 0,
        stop_reason: "exact_termination".into(),
        error_estimate: Cell::Float(0.0),
        extra,
    }
}

fn with_partials(mut cols: Vec<Column>, cli: &Cli) -> Vec<Column> {
    if cli.policy.partial_sums {
        cols.push(col("partial_sums", Source::Extra("partial_sums".into())));
    }
    cols
}

/// `points` evenly spaced values from `from` to `to`, endpoints included.
fn linear_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(from < to) || !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage(format!(
            "a grid needs from < to and at least 2 points (got [{from}, {to}], {points})"
        )));
    }
    let n = (points - 1) as f64;
    // weighted form keeps grid points that should be integers exact
    Ok((0..points)
        .map(|i| {
            let i = i as f64;
            (from * (n - i) + to * i) / n
        })
        .collect())
}

pub fn dispatch(cli: &Cli) -> CmdResult {
    let pol = |base: TruncationPolicy| cli.policy.resolve(base);
    match &cli.command {
        Command::RecipGamma { x } => {
            let p = pol(TruncationPolicy::default())?;
            let r = gammafuncs::recip_gamma_newton(x, &p)?;
            let reference = recip_gamma_ref(x.to_f64() + 1.0)?;
            let rec = report_record(
                "recip-gamma",
                Fields::default().with("x", arg_cell(x)),
                &r,
                Fields::default().with("reference", reference).with("abs_error", (r.value - reference).abs()),
            );
            let cols = with_partials(report_columns(&["x"], &["reference", "abs_error"]), cli);
            Ok(Outcome::new(vec![rec], cols).checked(&p))
        }
        Command::TaylorCoeffs { m, kmax } => {
            let approx: TaylorApprox = gammafuncs::taylor_coeffs(kmax.unwrap_or(*m), *m)?;
            let records = approx
                .coefficients
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let mut r = plain_record(
                        "taylor-coeffs",
                        Fields::default().with("m", *m).with("k", k),
                        Cell::Exact(a.to_string()),
                        Fields::default().with("approx", a.to_f64()),
                    );
                    r.terms_used = m + 1;
                    r
                })
                .collect();
            Ok(Outcome::new(
                records,
                vec![col("k", Source::Input("k".into())), col("coefficient", Source::Value)],
            ))
        }
        Command::Gamma { x, method } => {
            let xf = x.to_f64();
            let inputs = || {
                let name = match method {
                    GammaMethod::Newton => "newton",
                    GammaMethod::Product => "product",
                    GammaMethod::Reference => "reference",
                };
                Fields::default().with("x", arg_cell(x)).with("method", name)
            };
            if *method == GammaMethod::Reference {
                let rec = plain_record("gamma", inputs(), Cell::Float(gamma_ref(xf)?), Fields::default());
                return Ok(Outcome::new(vec![rec], report_columns(&["x", "method"], &[])));
            }
            let p = pol(TruncationPolicy::default())?;
            let r = match method {
                GammaMethod::Newton => gammafuncs::gamma_newton(x, &p)?,
                _ => gammafuncs::gamma_product(x, &p)?,
            };
            let reference = gamma_ref(xf)?;
            let rec = report_record(
                "gamma",
                inputs(),
                &r,
                Fields::default().with("reference", reference).with("abs_error", (r.value - reference).abs()),
            );
            let cols = with_partials(report_columns(&["x", "method"], &["reference", "abs_error"]), cli);
            Ok(Outcome::new(vec![rec], cols).checked(&p))
        }
        Command::Digamma { x } => {
            let p = pol(TruncationPolicy::default())?;
            let r = gammafuncs::digamma_stern(x, &p)?;
            let reference = digamma_ref(x.to_f64() + 1.0)?;
            let rec = report_record(
                "digamma",
                Fields::default().with("x", arg_cell(x)),
                &r,
                Fields::default().with("reference", reference).with("abs_error", (r.value - reference).abs()),
            );
            let cols = with_partials(report_columns(&["x"], &["reference", "abs_error"]), cli);
            Ok(Outcome::new(vec![rec], cols).checked(&p))
        }
        Command::EulerGamma { series, terms, list } => euler_gamma(*series, *terms, *list),
        Command::Oeis { seq, count, bfile } => {
            let values = eulerconst::oeis_terms(*seq, *count)?;
            if *bfile {
                let mut o = Outcome::new(Vec::new(), Vec::new());
                o.raw = Some(eulerconst::format_bfile(&values));
                return Ok(o);
            }
            let name = seq.to_string();
            let records = values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    plain_record(
                        "oeis",
                        Fields::default().with("seq", name.as_str()).with("n", i + 1),
                        Cell::Exact(v.to_string()),
                        Fields::default(),
                    )
                })
                .collect();
            Ok(Outcome::new(records, vec![col("n", Source::Input("n".into())), col("value", Source::Value)]))
        }
        Command::Lambda { x, log } => {
            let p = pol(lambdafn::default_policy())?;
            let r = if *log { lambdafn::lambda_log(*x, &p)? } else { lambdafn::lambda(*x, &p)? };
            let other = if *log { ("lambda", r.value.exp()) } else { ("ln_lambda", r.value.ln()) };
            let rec = report_record(
                "lambda",
                Fields::default().with("x", *x).with("log", if *log { "true" } else { "false" }),
                &r,
                Fields::default().with(other.0, other.1),
            );
            let cols = with_partials(report_columns(&["x"], &[other.0]), cli);
            Ok(Outcome::new(vec![rec], cols).checked(&p))
        }
        Command::InvGamma { x, oracle } => {
            let p = pol(TruncationPolicy::default())?;
            let r = invgamma::inv_gamma_series(*x, &p)?;
            let mut extra = Fields::default();
            let mut extras = vec![];
            if *oracle {
                let y = invgamma::inv_gamma_oracle(*x, ORACLE_TOL)?;
                extra = extra.with("oracle", y).with("abs_diff", (r.value - y).abs());
                extras = vec!["oracle", "abs_diff"];
            }
            let rec = report_record("inv-gamma", Fields::default().with("x", *x), &r, extra);
            let cols = with_partials(report_columns(&["x"], &extras), cli);
            Ok(Outcome::new(vec![rec], cols).checked(&p))
        }
        Command::Alpha => {
            let (a, ga) = invgamma::alpha();
            let rec = plain_record(
                "alpha",
                Fields::default(),
                Cell::Float(a),
                Fields::default().with("gamma_alpha", ga).with("digamma_alpha", digamma_ref(a)?),
            );
            Ok(Outcome::new(vec![rec], report_columns(&[], &["gamma_alpha", "digamma_alpha"])))
        }
        Command::InvCoeffs { count, digits, oracle } => inv_coeffs(*count, *digits, *oracle),
        Command::DivergenceDemo { count, x } => {
            let d = invgamma::divergence_demo(*count, *x)?;
            let records = d
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let mut r = plain_record(
                        "divergence-demo",
                        Fields::default().with("x", *x).with("k", i + 1),
                        Cell::Exact(a.to_string()),
                        Fields::default()
                            .with("term_magnitude", d.term_magnitudes[i])
                            .with("partial_sum", d.partial_sums[i]),
                    );
                    r.terms_used = i + 1;
                    r
                })
                .collect();
            Ok(Outcome::new(
                records,
                vec![
                    col("k", Source::Input("k".into())),
                    col("coefficient", Source::Value),
                    col("term_magnitude", Source::Extra("term_magnitude".into())),
                    col("partial_sum", Source::Extra("partial_sum".into())),
                ],
            ))
        }
        Command::PlotRecipGamma { from, to, points, orders } => plot_recip_gamma(*from, *to, *points, orders),
        Command::PlotLambda { from, to, points } => {
            let p = pol(lambdafn::default_policy())?;
            plot_lambda(*from, *to, *points, &p)
        }
        Command::InvgammaScan { delta, to, points } => {
            let p = pol(TruncationPolicy::default())?;
            invgamma_scan(*delta, *to, *points, &p)
        }
    }
}

fn euler_gamma(series: GammaSeries, terms: usize, list: bool) -> CmdResult {
    let name = series.to_string();
    if list {
        let ts = match series {
            GammaSeries::Laguerre => eulerconst::gamma_terms_laguerre(terms)?,
            GammaSeries::Kk => eulerconst::gamma_terms_kk(terms)?,
        };
        let records = ts
            .iter()
            .map(|t| {
                let mut r = plain_record(
                    "euler-gamma",
                    Fields::default().with("series", name.as_str()).with("n", t.index),
                    Cell::Exact(t.term.to_string()),
                    Fields::default().with("partial_sum", Cell::Exact(t.partial_sum.to_string())),
                );
                r.terms_used = t.index;
                r
            })
            .collect();
        return Ok(Outcome::new(
            records,
            vec![
                col("n", Source::Input("n".into())),
                col("term", Source::Value),
                col("partial_sum", Source::Extra("partial_sum".into())),
            ],
        ));
    }
    let e = eulerconst::estimate_gamma(series, terms)?;
    // a fixed number of terms was asked for; the error against the
    // published constant stands in for the estimate
    let rec = OutputRecord {
        command: "euler-gamma".into(),
        inputs: Fields::default().with("series", name.as_str()).with("terms", terms),
        value: Cell::Float(e.value),
        terms_used: e.terms,
        stop_reason: "max_terms".into(),
        error_estimate: Cell::Float(e.error.abs()),
        extra: Fields::default()
            .with("error", e.error)
            .with("exact_partial_sum", Cell::Exact(e.partial_sum.to_string())),
    };
    Ok(Outcome::new(vec![rec], report_columns(&["series", "terms"], &["error"])))
}

fn inv_coeffs(count: usize, digits: usize, oracle: bool) -> CmdResult {
    if count == 0 || digits == 0 {
        return Err(CliError::Usage("count and digits must be positive".into()));
    }
    let records: Vec<OutputRecord> = (0..count)
        .into_par_iter()
        .map(|n| {
            let c = invgamma::inv_coeff(n, digits);
            let mut extra = Fields::default();
            if oracle {
                let o = invgamma::inv_coeff_oracle(n, digits);
                // the oracle's first entry is the constant outside the sum
                let shift = if n == 0 { 2.0 } else { 0.0 };
                extra = extra.with("oracle", o).with("abs_diff", (c.value + shift - o).abs());
            }
            let mut r = plain_record(
                "inv-coeffs",
                Fields::default().with("n", n).with("digits", digits),
                Cell::Float(c.value),
                extra,
            );
            r.terms_used = n + 1;
            r
        })
        .collect();
    let mut cols = vec![col("n", Source::Input("n".into())), col("coefficient", Source::Value)];
    if oracle {
        cols.push(col("oracle", Source::Extra("oracle".into())));
        cols.push(col("abs_diff", Source::Extra("abs_diff".into())));
    }
    Ok(Outcome::new(records, cols))
}

fn plot_recip_gamma(from: f64, to: f64, points: usize, orders: &[usize]) -> CmdResult {
    let xs = linear_grid(from, to, points)?;
    if orders.is_empty() {
        return Err(CliError::Usage("at least one order is needed".into()));
    }
    let approx: Vec<TaylorApprox> = orders
        .iter()
        .map(|&m| gammafuncs::taylor_coeffs(m, m))
        .collect::<Result<_, _>>()?;
    let names: Vec<String> = orders.iter().map(|m| format!("taylor_m{m}")).collect();
    let records = xs
        .par_iter()
        .map(|&x| {
            let reference = recip_gamma_ref(x + 1.0)?;
            let mut extra = Fields::default();
            for (a, name) in approx.iter().zip(&names) {
                extra = extra.with(name.as_str(), gammafuncs::eval_taylor(a, &Arg::Float(x)).to_f64());
            }
            Ok(plain_record("plot-recip-gamma", Fields::default().with("x", x), Cell::Float(reference), extra))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut cols = vec![col("x", Source::Input("x".into())), col("reference", Source::Value)];
    cols.extend(names.iter().map(|n| col(n.as_str(), Source::Extra(n.clone()))));
    Ok(Outcome::new(records, cols))
}

fn plot_lambda(from: f64, to: f64, points: usize, policy: &TruncationPolicy) -> CmdResult {
    let xs = linear_grid(from, to, points)?;
    // fill the coefficient cache once so no point depends on scheduling
    lambdafn::lambda_inner_sum_logs(policy.max_terms);
    let reports = xs
        .par_iter()
        .map(|&x| lambdafn::lambda_log(x, policy))
        .collect::<Result<Vec<_>, _>>()?;
    let ln: Vec<f64> = reports.iter().map(|r| r.value).collect();
    let records = xs
        .iter()
        .zip(&reports)
        .enumerate()
        .map(|(i, (&x, r))| {
            // exploratory convexity check on ln Λ; not a claim either way
            let d2 = if i == 0 || i + 1 == xs.len() {
                Cell::Empty
            } else {
                Cell::Float(ln[i + 1] - 2.0 * ln[i] + ln[i - 1])
            };
            let mut rec = report_record(
                "plot-lambda",
                Fields::default().with("x", x),
                &r.clone().map_value(f64::exp),
                Fields::default().with("ln_lambda", r.value).with("ln_second_difference", d2),
            );
            rec.error_estimate = Cell::Float(r.value.exp() * r.error_estimate.exp_m1());
            rec
        })
        .collect();
    let cols = vec![
        col("x", Source::Input("x".into())),
        col("lambda", Source::Value),
        col("ln_lambda", Source::Extra("ln_lambda".into())),
        col("terms_used", Source::TermsUsed),
        col("stop_reason", Source::StopReason),
        col("ln_second_difference", Source::Extra("ln_second_difference".into())),
    ];
    Ok(Outcome::new(records, cols))
}

fn invgamma_scan(delta: f64, to: f64, points: usize, policy: &TruncationPolicy) -> CmdResult {
    let (_, ga) = invgamma::alpha();
    if !(delta > 0.0) {
        return Err(CliError::Usage(format!("delta must be positive, got {delta}")));
    }
    let start = ga + delta;
    let mut xs: Vec<f64> = linear_grid(start.ln(), to.ln(), points)?.into_iter().map(f64::exp).collect();
    xs[0] = start;
    xs[points - 1] = to;
    invgamma::inv_coeffs_f64(policy.max_terms.min(invgamma::INV_COEFF_CAP));
    let records = xs
        .par_iter()
        .map(|&x| {
            let r = invgamma::inv_gamma_series(x, policy)?;
            let y = invgamma::inv_gamma_oracle(x, ORACLE_TOL)?;
            Ok(report_record(
                "invgamma-scan",
                Fields::default().with("x", x),
                &r,
                Fields::default().with("oracle", y).with("abs_diff", (r.value - y).abs()),
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let cols = vec![
        col("x", Source::Input("x".into())),
        col("series", Source::Value),
        col("oracle", Source::Extra("oracle".into())),
        col("abs_diff", Source::Extra("abs_diff".into())),
        col("terms_used", Source::TermsUsed),
        col("stop_reason", Source::StopReason),
    ];
    Ok(Outcome::new(records, cols))
}
