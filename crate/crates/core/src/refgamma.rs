//! Double-precision reference values of `Γ`, `ln Γ` and `ψ`.
//!
//! Nothing here uses the series from the rest of the crate; these functions
//! are the yardstick the series are checked against.

// constants are kept as published, digits beyond double precision included
#![allow(clippy::approx_constant, clippy::excessive_precision)]

use serde::Serialize;

use crate::error::{Error, Result};

/// Published decimal values, rounded to the nearest double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefConstants {
    pub euler_gamma: f64,
    pub pi: f64,
    pub sqrt_pi: f64,
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

pub const CONSTANTS: RefConstants = RefConstants {
    euler_gamma: EULER_GAMMA,
    pi: 3.141_592_653_589_793_2,
    sqrt_pi: 1.772_453_850_905_516_0,
};

// Lanczos approximation with Pugh's parameters (r = 10.900511, 11 terms),
// the same table Boost and statrs ship. The approximation itself is good
// to about 1e-15; double rounding in the power term leaves ~1e-13 at x = 50.
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_557_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];
/// `2 sqrt(e / pi)`.
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_717_336_249_247_266_663_112_059_421_841_408_575_5;
/// `ln(2 sqrt(e / pi))`.
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_222_345_518_445_781_647_212_251_852_647_462_6;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, x, "x > 0"))
    }
}

/// `Γ(x)` for `x > 0`. Arguments below 1/2 are shifted up with
/// `Γ(x) = Γ(x+1)/x`. Overflows to infinity beyond `x ≈ 171.6`.
pub fn gamma_ref(x: f64) -> Result<f64> {
    check_positive("gamma_ref", x)?;
    if x < 0.5 {
        return Ok(gamma_ref(x + 1.0)? / x);
    }
    let s = lanczos_sum(x);
    // split the power so the intermediate does not overflow before Γ does
    let half = ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).powf((x - 0.5) / 2.0);
    Ok(s * TWO_SQRT_E_OVER_PI * half * half)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma_ref(x: f64) -> Result<f64> {
    check_positive("ln_gamma_ref", x)?;
    if x < 0.5 {
        return Ok(ln_gamma_ref(x + 1.0)? - x.ln());
    }
    let s = lanczos_sum(x);
    Ok(s.ln() + LN_TWO_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R).ln() - 1.0))
}

/// `sin(pi x)` with the argument reduced first, so integers give exact zeros.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]; sin(pi (1 - r)) = sin(pi r)
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (std::f64::consts::PI * r).sin()
}

/// `1/Γ(z)` for every real `z`; zero at `0, -1, -2, ...`.
///
/// Non-positive arguments go through the reflection formula
/// `1/Γ(z) = Γ(1-z) sin(pi z) / pi`.
pub fn recip_gamma_ref(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::domain("recip_gamma_ref", z, "finite z"));
    }
    if z > 0.0 {
        return Ok(1.0 / gamma_ref(z)?);
    }
    if z.fract() == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma_ref(1.0 - z)? * sin_pi(z) / std::f64::consts::PI)
}

/// `ψ(x)` for `x > 0`: recurrence up to `x >= 8`, then the asymptotic
/// expansion through the `B_14` term.
pub fn digamma_ref(x: f64) -> Result<f64> {
    check_positive("digamma_ref", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < 8.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let z = 1.0 / (x * x);
    // B_2k / (2k), k = 1..7
    let tail = z
        * (1.0 / 12.0
            - z * (1.0 / 120.0
                - z * (1.0 / 252.0
                    - z * (1.0 / 240.0 - z * (1.0 / 132.0 - z * (691.0 / 32760.0 - z / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn constants_match_published_digits() {
        assert_eq!(CONSTANTS.pi, std::f64::consts::PI);
        assert_eq!(CONSTANTS.sqrt_pi, "1.7724538509055160272981674833".parse::<f64>().unwrap());
        assert_eq!(format!("{:.16}", CONSTANTS.euler_gamma), "0.5772156649015329");
    }

    #[test]
    fn gamma_examples() {
        assert!(rel(gamma_ref(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma_ref(0.5).unwrap(), 1.772_453_850_905_516) < 1e-14);
        assert!(rel(gamma_ref(1.5).unwrap(), CONSTANTS.sqrt_pi / 2.0) < 1e-14);
        assert!(rel(gamma_ref(0.25).unwrap(), 3.625_609_908_221_908_3) < 1e-14);
        assert!(gamma_ref(0.0).is_err());
        assert!(gamma_ref(-1.5).is_err());
        assert!(gamma_ref(f64::NAN).is_err());
    }

    #[test]
    fn gamma_at_integers_is_factorial() {
        let mut fact = 1.0f64;
        for n in 1..=50 {
            assert!(rel(gamma_ref(n as f64).unwrap(), fact) < 1e-12, "n = {n}");
            fact *= n as f64;
        }
        assert!(gamma_ref(171.0).unwrap().is_finite());
    }

    #[test]
    fn functional_equation() {
        for x in [0.5, 1.3, 7.7, 23.1, 49.0] {
            let lhs = gamma_ref(x + 1.0).unwrap();
            assert!((lhs - x * gamma_ref(x).unwrap()).abs() <= 1e-12 * lhs, "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_agrees_with_gamma() {
        for x in [0.1, 0.5, 1.0, 2.5, 10.0, 42.42, 150.0] {
            let g = gamma_ref(x).unwrap();
            assert!((ln_gamma_ref(x).unwrap() - g.ln()).abs() < 1e-12 * g.ln().abs().max(1.0), "x = {x}");
        }
        assert!(ln_gamma_ref(1000.0).unwrap() > 5900.0);
    }

    #[test]
    fn reciprocal_gamma_everywhere() {
        assert_eq!(recip_gamma_ref(0.0).unwrap(), 0.0);
        assert_eq!(recip_gamma_ref(-3.0).unwrap(), 0.0);
        // 1/Γ(-1/2) = -1/(2 sqrt(pi))
        let v = recip_gamma_ref(-0.5).unwrap();
        assert!(rel(v, -0.5 / CONSTANTS.sqrt_pi) < 1e-14);
        // 1/Γ(-1.1) via Γ(z+1) = z Γ(z) from Γ(0.9)
        let g09 = gamma_ref(0.9).unwrap();
        let expected = -1.1 * -0.1 / g09;
        assert!(rel(recip_gamma_ref(-1.1).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn digamma_examples() {
        let g = CONSTANTS.euler_gamma;
        assert!((digamma_ref(1.0).unwrap() + g).abs() < 1e-14);
        assert!((digamma_ref(2.0).unwrap() - (1.0 - g)).abs() < 1e-14);
        assert!((digamma_ref(0.5).unwrap() - (-g - 2.0 * std::f64::consts::LN_2)).abs() < 1e-14);
        assert!((digamma_ref(0.5).unwrap() + 1.963_510_026_021_423_5).abs() < 1e-14);
        assert!(digamma_ref(0.0).is_err());
    }

    #[test]
    fn digamma_recurrence() {
        for x in [0.5, 2.25, 10.0, 7.999, 33.3] {
            let d = digamma_ref(x + 1.0).unwrap() - digamma_ref(x).unwrap();
            assert!((d - 1.0 / x).abs() < 1e-12, "x = {x}");
        }
    }
}
