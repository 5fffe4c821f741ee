//! Special functions needed by the traveling-wave solution: `ln Γ` and the
//! Gauss hypergeometric function restricted to the shape
//! `2F1(a, b; b+1; z)` with `0 < a < 1`, `b > 0`, `0 ≤ z ≤ 1`.
//!
//! In that shape `c − a − b = 1 − a > 0`, so the series converges at `z = 1`
//! and Gauss's summation theorem applies there.

use core::f64::consts::PI;

use crate::math::{exp, ln, powf, sin};
use crate::quadrature::integrate;
use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Arguments below this use the power series, above it the incomplete-beta
/// quadrature.
pub const SERIES_CUTOFF: f64 = 0.5;

const QUAD_REL_TOL: f64 = 1e-14;

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Lanczos approximation (g = 7, nine terms) with the reflection formula
/// below `x = 1/2`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            reason: "ln_gamma needs a positive finite argument",
        });
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx), and sin(πx) > 0 on (0, 1/2).
        return ln(PI / sin(PI * x)) - ln_gamma_unchecked(1.0 - x);
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * ln(2.0 * PI) + (x + 0.5) * ln(t) - t + ln(series)
}

/// Validated arguments of `2F1(a, b; b+1; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    a: f64,
    b: f64,
    z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain {
                name: "a",
                value: a,
                reason: "need 0 < a < 1",
            });
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Domain {
                name: "b",
                value: b,
                reason: "need b > 0",
            });
        }
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::Domain {
                name: "z",
                value: z,
                reason: "need 0 <= z <= 1",
            });
        }
        Ok(Self { a, b, z })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// `2F1(a, b; b+1; z)`.
///
/// Power series for `z ≤ SERIES_CUTOFF`, incomplete-beta quadrature on the
/// rest of the open interval, Gauss's formula at `z = 1`.
pub fn hyp2f1_b_plus_one(args: Hyp2F1Args) -> Result<f64> {
    let z = args.z;
    if z == 0.0 {
        Ok(1.0)
    } else if z == 1.0 {
        Ok(hyp2f1_at_unity(args.a, args.b))
    } else if z <= SERIES_CUTOFF {
        Ok(hyp2f1_series(args))
    } else {
        hyp2f1_incomplete_beta(args)
    }
}

/// Gauss summation `Γ(b+1) Γ(1−a) / Γ(b+1−a)`.
pub fn hyp2f1_at_unity(a: f64, b: f64) -> f64 {
    exp(ln_gamma_unchecked(b + 1.0) + ln_gamma_unchecked(1.0 - a) - ln_gamma_unchecked(b + 1.0 - a))
}

/// Defining power series `Σ (a)_k / k! · b/(b+k) · z^k`, summed until the
/// geometric bound on the tail falls below round-off. Requires `z < 1`.
pub fn hyp2f1_series(args: Hyp2F1Args) -> f64 {
    let Hyp2F1Args { a, b, z } = args;
    debug_assert!(z < 1.0);
    // (a)_k / k! is decreasing for 0 < a < 1, so successive terms shrink at
    // least as fast as z^k and the tail after term k is below term * z/(1−z).
    let tail_factor = z / (1.0 - z);
    let mut pochhammer = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        pochhammer *= (a + k) / (k + 1.0) * z;
        k += 1.0;
        let term = pochhammer * b / (b + k);
        sum += term;
        if term * tail_factor <= f64::EPSILON * 0.25 * sum || k > 1.0e6 {
            return sum;
        }
    }
}

/// `b z^(−b) ∫_0^z t^(b−1) (1−t)^(−a) dt` by adaptive quadrature.
///
/// On `[0, min(z, 1/2)]` the substitution `u = t^b` removes the `t^(b−1)`
/// singularity; on `[1/2, z]` the substitution `s = (1−t)^(1−a)` removes the
/// growth of `(1−t)^(−a)`, which is singular at `z = 1`.
pub fn hyp2f1_incomplete_beta(args: Hyp2F1Args) -> Result<f64> {
    let Hyp2F1Args { a, b, z } = args;
    if z == 0.0 {
        return Ok(1.0);
    }
    let split = z.min(0.5);

    // b ∫_0^split t^(b−1)(1−t)^(−a) dt = ∫_0^(split^b) (1 − u^(1/b))^(−a) du
    let inv_b = 1.0 / b;
    let head = integrate(
        |u| powf(1.0 - powf(u, inv_b), -a),
        0.0,
        powf(split, b),
        QUAD_REL_TOL,
        0.0,
    )?;

    let tail = if z > 0.5 {
        // b ∫_(1/2)^z t^(b−1)(1−t)^(−a) dt = b/(1−a) ∫_(s_z)^(s_half) (1 − s^(1/(1−a)))^(b−1) ds
        let one_minus_a = 1.0 - a;
        let inv = 1.0 / one_minus_a;
        let s_lo = powf(1.0 - z, one_minus_a);
        let s_hi = powf(0.5, one_minus_a);
        let v = integrate(
            |s| powf(1.0 - powf(s, inv), b - 1.0),
            s_lo,
            s_hi,
            QUAD_REL_TOL,
            0.0,
        )?;
        b * inv * v
    } else {
        0.0
    };

    Ok(powf(z, -b) * (head + tail))
}
