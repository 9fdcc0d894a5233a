//! Command-line front end: evaluate the representations, dump coefficient
//! tables and series terms, write OEIS b-files and emit plot grids.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 a series hit
//! its term cap with the error estimate still above `--tol`.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};
use gammaseries::eulerconst::{GammaSeries, OeisSequence};
use gammaseries::{Arg, TruncationPolicy};

use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gammaseries", version, about = "Newton-series representations of the gamma function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,

    /// Worker threads for the grid commands (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(flatten)]
    pub policy: PolicyArgs,
}

/// Flags that map one to one onto the truncation policy.
#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Term cap.
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    /// Absolute tolerance on the terms.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// How many consecutive terms must fall below the tolerance.
    #[arg(long, global = true)]
    pub consecutive_small: Option<usize>,

    /// Keep every partial sum in the output.
    #[arg(long, global = true)]
    pub partial_sums: bool,
}

impl PolicyArgs {
    /// The command's default policy with any flags applied on top.
    pub fn resolve(&self, base: TruncationPolicy) -> gammaseries::Result<TruncationPolicy> {
        let p = TruncationPolicy::new(
            self.max_terms.unwrap_or(base.max_terms),
            self.tol.unwrap_or(base.abs_tol),
            self.consecutive_small.unwrap_or(base.consecutive_small),
        )?;
        Ok(p.with_partial_sums(self.partial_sums))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GammaMethod {
    Newton,
    Product,
    Reference,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// 1/Γ(x+1) from the Laguerre Newton series.
    RecipGamma {
        /// Decimal or exact "p/q".
        #[arg(long, allow_hyphen_values = true)]
        x: Arg,
    },
    /// Exact Taylor coefficients a_0..a_kmax of the order-m truncation of 1/Γ(x+1).
    TaylorCoeffs {
        #[arg(long)]
        m: usize,
        /// Defaults to m.
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Γ(x).
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        x: Arg,
        #[arg(long, value_enum, default_value = "newton")]
        method: GammaMethod,
    },
    /// ψ(x+1) from the Stern series.
    Digamma {
        #[arg(long, allow_hyphen_values = true)]
        x: Arg,
    },
    /// Exact partial sums of the rational series for γ.
    EulerGamma {
        #[arg(long, default_value = "kk")]
        series: GammaSeries,
        /// Last index summed (laguerre: n = 1..=N, kk: n = 2..=N).
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// List every term instead of the estimate.
        #[arg(long)]
        list: bool,
    },
    /// Numerators (A360092) or denominators (A360091) of the γ series terms.
    Oeis {
        #[arg(long)]
        seq: OeisSequence,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Plain "n value" lines.
        #[arg(long)]
        bfile: bool,
    },
    /// The Λ pseudogamma function.
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Report ln Λ(x) instead.
        #[arg(long)]
        log: bool,
    },
    /// Principal inverse gamma from the log-factorial Newton series.
    InvGamma {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Also solve Γ(y) = x by bisection and report the difference.
        #[arg(long)]
        oracle: bool,
    },
    /// The positive zero α of ψ and Γ(α).
    Alpha,
    /// Coefficients of the inverse gamma series.
    InvCoeffs {
        #[arg(long, default_value_t = 13)]
        count: usize,
        /// Working precision in decimal digits.
        #[arg(long, default_value_t = 200)]
        digits: usize,
        /// Compare against a divided-difference table (n = 0 includes the constant 2).
        #[arg(long)]
        oracle: bool,
    },
    /// The naive factorial-node series for the inverse gamma function.
    DivergenceDemo {
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        x: f64,
    },
    /// Grid of 1/Γ(x+1) and its truncated Taylor approximants.
    PlotRecipGamma {
        #[arg(long, default_value_t = -1.1, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 103)]
        points: usize,
        /// Truncation orders m, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        orders: Vec<usize>,
    },
    /// Grid of Λ(x) and ln Λ(x).
    PlotLambda {
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 161)]
        points: usize,
    },
    /// Inverse gamma series against the root finder, on a logarithmic grid above Γ(α).
    InvgammaScan {
        /// Offset of the first point above Γ(α).
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[arg(long, default_value_t = 1e4)]
        to: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
    },
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                commands::CliError::Lib(gammaseries::Error::Domain { .. }) => EXIT_DOMAIN,
                commands::CliError::Io(ref io) if io.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, commands::CliError> {
    let outcome = match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| commands::CliError::Usage(e.to_string()))?;
            pool.install(|| commands::dispatch(cli))?
        }
        None => commands::dispatch(cli)?,
    };
    outcome.write(out, cli.format)?;
    out.flush()?;
    Ok(outcome.exit_code())
}
