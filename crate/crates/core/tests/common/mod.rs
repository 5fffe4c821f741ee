//! Test-only oracles, independent of the library's quadrature and special
//! function code.

#![allow(dead_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh (double exponential) quadrature of `f` over `[a, b]`.
///
/// The integrand receives `(x, x − a, b − x)` with the endpoint distances
/// computed without cancellation, so endpoint singularities can be evaluated
/// accurately.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let width = b - a;
    let step = 1.0 / 128.0;
    let mut sum = 0.0;
    let kmax = (7.0 / step) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * step;
        let u = FRAC_PI_2 * t.sinh();
        let to_a = width / (1.0 + (-2.0 * u).exp());
        let to_b = width / (1.0 + (2.0 * u).exp());
        if !(to_a > 1e-300) || !(to_b > 1e-300) {
            continue;
        }
        let cu = u.cosh();
        let w = width * 0.5 * FRAC_PI_2 * t.cosh() / (cu * cu);
        let x = if to_a <= to_b { a + to_a } else { b - to_b };
        let v = f(x, to_a, to_b);
        if v.is_finite() {
            sum += w * v;
        }
    }
    sum * step
}

/// `2F1(a, b; b+1; z) = b z^(−b) ∫_0^z t^(b−1) (1−t)^(−a) dt`.
pub fn hyp2f1_oracle(a: f64, b: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    let integral = tanh_sinh(
        |_, t, to_z| {
            let one_minus_t = (1.0 - z) + to_z;
            t.powf(b - 1.0) * one_minus_t.powf(-a)
        },
        0.0,
        z,
    );
    b * z.powf(-b) * integral
}

/// `U_max^n − U^n` for `U = U_max − d`, factored to avoid cancellation.
fn gap_pow(u_max: f64, d: f64, n: i32) -> f64 {
    let u = u_max - d;
    let mut s = 0.0;
    for i in 0..n {
        s += u_max.powi(i) * u.powi(n - 1 - i);
    }
    d * s
}

pub struct WaveConstants {
    pub n: i32,
    pub m: i32,
    pub c: f64,
    pub u_max: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl WaveConstants {
    pub fn new(n: i32, m: i32, c: f64) -> Self {
        let (nf, mf) = (n as f64, m as f64);
        Self {
            n,
            m,
            c,
            u_max: ((nf + 1.0) * (nf + 2.0) * c / 2.0).powf(1.0 / nf),
            kappa: (mf + 1.0) * c / (2.0 * mf),
            gamma: (mf + 1.0) / ((nf + 1.0) * (nf + 2.0) * mf),
        }
    }

    /// `[U²(κ − γUⁿ)]^(−1/(m+1))` with `U = U_max − d`.
    fn weight(&self, u: f64, d: f64) -> f64 {
        let r = u * u * self.gamma * gap_pow(self.u_max, d, self.n);
        r.powf(-1.0 / (self.m as f64 + 1.0))
    }

    /// `∫_lo^U_max dU / [U²(κ − γUⁿ)]^(1/(m+1))`: distance from the crest at
    /// which the wave equals `lo`; `lo = 0` gives `ξ0`.
    pub fn distance_from_crest(&self, lo: f64) -> f64 {
        tanh_sinh(|u, _, d| self.weight(u, d), lo, self.u_max)
    }

    /// `∫_(−ξ0)^(ξ0) U dξ = 2 ∫_0^U_max U dU / [...]^(1/(m+1))`.
    pub fn integral_of_profile(&self) -> f64 {
        2.0 * tanh_sinh(|u, _, d| u * self.weight(u, d), 0.0, self.u_max)
    }
}

/// Classical RK4 integration of `U' = −[κU² − γU^(n+2)]^(1/(m+1))` from the
/// crest (`U(0) = U_max`) out to `ξ`, started with the exact near-crest
/// expansion to step over the non-Lipschitz point.
pub fn shoot_from_crest(w: &WaveConstants, xi: f64, steps: usize) -> f64 {
    let mf = w.m as f64;
    let rate = |u: f64| -> f64 {
        let d = (w.u_max - u).max(0.0);
        let r = u * u * w.gamma * gap_pow(w.u_max, d, w.n);
        -(r.max(0.0)).powf(1.0 / (mf + 1.0))
    };
    // Near the crest U_max − U ≈ A ξ^((m+1)/m) with
    // A = [(m/(m+1))^(m+1) · U_max² γ n U_max^(n−1)]^(1/m).
    let slope_coeff = w.u_max * w.u_max * w.gamma * w.n as f64 * w.u_max.powi(w.n - 1);
    let amp = ((mf / (mf + 1.0)).powf(mf + 1.0) * slope_coeff).powf(1.0 / mf);
    let xi_start = 1e-6 * xi;
    let mut u = w.u_max - amp * xi_start.powf((mf + 1.0) / mf);
    let h = (xi - xi_start) / steps as f64;
    for _ in 0..steps {
        let k1 = rate(u);
        let k2 = rate(u + 0.5 * h * k1);
        let k3 = rate(u + 0.5 * h * k2);
        let k4 = rate(u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    u
}
