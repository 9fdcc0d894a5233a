//! Series and product representations of the gamma function built from
//! Newton interpolation.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: exact rationals, factorials, Stirling numbers of the first
//!   kind, Laguerre values `L_n(1)` and other combinatorial building blocks.
//! - [`newton`]: forward and divided differences, Newton-form evaluation and
//!   the truncation machinery ([`TruncationPolicy`], [`EvalReport`]) shared by
//!   every infinite series in the crate.
//! - [`gammafuncs`]: `1/Γ(x+1)` as a Laguerre–Newton series, its exact
//!   Taylor coefficients, `Γ(x)` as `x^(x-1)` times a Newton series, the
//!   factorial product form and the Stern series for the digamma function.
//! - [`eulerconst`]: two series for the Euler–Mascheroni constant with
//!   rational terms, and the OEIS sequences they generate.
//! - [`lambdafn`]: the Λ pseudogamma function, which interpolates `n!` at the
//!   positive integers and `1/n!` at the negative ones.
//! - [`invgamma`]: a Newton series on log-factorial nodes for the principal
//!   branch of the inverse gamma function, with divided-difference and
//!   root-finding oracles.
//! - [`refgamma`]: an independent double-precision reference for `Γ`, `ln Γ`
//!   and `ψ` used to validate everything else.

pub mod error;
pub mod eulerconst;
pub mod exactnum;
pub mod gammafuncs;
pub mod hp;
pub mod invgamma;
pub mod lambdafn;
pub mod newton;
pub mod refgamma;

pub use error::{Error, Result};
pub use exactnum::Rational;
pub use newton::{Arg, CoefficientTable, EvalReport, StopReason, TruncationPolicy};
