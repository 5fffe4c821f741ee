//! Peaked compact traveling waves ("peakompactons").
//!
//! With `u(x, t) = U(ξ)`, `ξ = x − ct`, and localized boundary conditions
//! (both integration constants zero) the traveling-wave ODE integrates to
//!
//! ```text
//! (U')^(m+1) = κ U² − γ U^(n+2),   κ = (m+1)c/(2m),   γ = (m+1)/((n+1)(n+2)m)
//! ```
//!
//! The right-hand side vanishes at `U = 0` and `U = U_max = [(n+1)(n+2)c/2]^(1/n)`.
//! Integrating from the support edge gives the implicit solution
//!
//! ```text
//! L(U) = (m+1)/(m−1) · U (κU²)^(−1/(m+1)) · 2F1(1/(m+1), b; 1+b; (U/U_max)^n),
//! b = (m−1)/((m+1)n)
//! ```
//!
//! and `ξ0 = L(U_max)`. The wave is `U(ξ)` with `|ξ| = ξ0 − L(U)` on
//! `|ξ| < ξ0` and zero outside, peaked at `ξ = 0`.

use crate::math::{cosh, powf, powi, sqrt};
use crate::model::HierarchyParams;
use crate::specfun::{hyp2f1_b_plus_one, Hyp2F1Args};
use crate::{Error, Result};

/// Below this `|ξ|` the profile returns `U_max` without inverting.
pub const PEAK_SNAP: f64 = 1e-10;

/// Absolute tolerance in `U` for the bisection inversion.
pub const INVERSION_TOL: f64 = 1e-12;

/// A fully resolved peakompacton of the `(n, m)` equation with speed `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peakompacton {
    params: HierarchyParams,
    c: f64,
    u_max: f64,
    kappa: f64,
    gamma_coef: f64,
    xi0: f64,
}

/// `(U')^(m+1) − κU² + γU^(n+2)` for the `(n, m)` equation with speed `c`.
///
/// Zero along solutions of the second integral with vanishing integration
/// constants. Valid for every `m ≥ 1`, including the KdV case.
pub fn second_integral_residual(p: HierarchyParams, c: f64, u: f64, du: f64) -> f64 {
    let (n, m) = (f64::from(p.n()), f64::from(p.m()));
    let kappa = (m + 1.0) * c / (2.0 * m);
    let gamma = (m + 1.0) / ((n + 1.0) * (n + 2.0) * m);
    powi(du, p.m() + 1) - kappa * u * u + gamma * powi(u, p.n() + 2)
}

impl Peakompacton {
    pub fn build(params: HierarchyParams, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain {
                name: "c",
                value: c,
                reason: "wave speed must be positive and finite",
            });
        }
        if params.m() < 2 {
            return Err(Error::InvalidParams {
                n: params.n(),
                m: params.m(),
                reason: "compact peaked waves need m >= 2",
            });
        }
        let (n, m) = (f64::from(params.n()), f64::from(params.m()));
        let u_max = powf((n + 1.0) * (n + 2.0) * c / 2.0, 1.0 / n);
        let kappa = (m + 1.0) * c / (2.0 * m);
        let gamma_coef = (m + 1.0) / ((n + 1.0) * (n + 2.0) * m);
        let mut wave = Self {
            params,
            c,
            u_max,
            kappa,
            gamma_coef,
            xi0: 0.0,
        };
        wave.xi0 = wave.implicit_lhs(u_max)?;
        Ok(wave)
    }

    pub fn params(&self) -> HierarchyParams {
        self.params
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma_coef(&self) -> f64 {
        self.gamma_coef
    }

    /// Half-width of the support.
    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    fn hyp_params(&self) -> (f64, f64) {
        let (n, m) = (f64::from(self.params.n()), f64::from(self.params.m()));
        (1.0 / (m + 1.0), (m - 1.0) / ((m + 1.0) * n))
    }

    /// Left-hand side `L(U)` of the implicit solution, for `0 ≤ U ≤ U_max`.
    pub fn implicit_lhs(&self, u: f64) -> Result<f64> {
        if !(0.0..=self.u_max).contains(&u) {
            return Err(Error::Domain {
                name: "U",
                value: u,
                reason: "must lie in [0, U_max]",
            });
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        let m = f64::from(self.params.m());
        let (a, b) = self.hyp_params();
        // γ/κ · U^n = (U/U_max)^n; written this way z hits 1 exactly at the peak.
        let z = powi(u / self.u_max, self.params.n()).min(1.0);
        let f = hyp2f1_b_plus_one(Hyp2F1Args::new(a, b, z)?)?;
        Ok((m + 1.0) / (m - 1.0) * u * powf(self.kappa * u * u, -1.0 / (m + 1.0)) * f)
    }

    /// Distance `|ξ| = ξ0 − L(U)` from the crest at which the wave takes the
    /// value `U ∈ (0, U_max]`.
    pub fn xi_of_u(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= self.u_max) {
            return Err(Error::Domain {
                name: "U",
                value: u,
                reason: "must lie in (0, U_max]",
            });
        }
        Ok(self.xi0 - self.implicit_lhs(u)?)
    }

    /// Wave profile `U(ξ)`; even in `ξ`, zero for `|ξ| ≥ ξ0`.
    pub fn profile(&self, xi: f64) -> f64 {
        let target = xi.abs();
        if target >= self.xi0 || target.is_nan() {
            return 0.0;
        }
        if target < PEAK_SNAP {
            return self.u_max;
        }
        // |ξ|(U) decreases from ξ0 at U = 0 to 0 at U = U_max.
        let (mut lo, mut hi) = (0.0, self.u_max);
        while hi - lo > INVERSION_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            // mid is strictly inside (0, U_max), so xi_of_u cannot fail on
            // the domain check; a quadrature failure is treated as "outside".
            match self.xi_of_u(mid) {
                Ok(d) if d > target => lo = mid,
                _ => hi = mid,
            }
        }
        0.5 * (lo + hi)
    }

    /// `U''` as a function of `U ∈ (0, U_max)`.
    pub fn second_derivative(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < self.u_max) {
            return Err(Error::Domain {
                name: "U",
                value: u,
                reason: "must lie in (0, U_max)",
            });
        }
        let (np, mp) = (self.params.n(), self.params.m());
        let (n, m) = (f64::from(np), f64::from(mp));
        let c = self.c;
        let u_n = powi(u, np);
        let peak_n = powi(self.u_max, np);
        Ok(powf(u, -(m - 3.0) / (m + 1.0))
            * powf(peak_n - u_n, -(m - 1.0) / (m + 1.0))
            * (c * (n + 1.0) - u_n)
            * powf(peak_n, -2.0 / (m + 1.0))
            * powf(self.kappa, -(m - 1.0) / (m + 1.0))
            * (n + 2.0)
            * c
            / (2.0 * m))
    }

    /// Residual of the second integral at `(U, U')`.
    pub fn ode_residual(&self, u: f64, du: f64) -> f64 {
        powi(du, self.params.m() + 1) - self.kappa * u * u + self.gamma_coef * powi(u, self.params.n() + 2)
    }

    pub fn edge_behavior(&self) -> EdgeBehavior {
        classify(self.params.m(), self.c)
    }
}

/// Limiting behaviour of `U''` at a junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    Vanishing,
    Finite(f64),
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBehavior {
    /// `U → 0⁺`, i.e. `ξ → ±ξ0`.
    pub edge: Curvature,
    /// `U → U_max⁻`, i.e. `ξ → 0`.
    pub peak: Curvature,
}

/// Classifies `U''` at the support edge and at the crest.
///
/// Near the edge `U'' ~ U^(−(m−3)/(m+1))`; near the crest
/// `U'' ~ (U_max^n − U^n)^(−(m−1)/(m+1))`.
pub fn edge_behavior(p: HierarchyParams, c: f64) -> Result<EdgeBehavior> {
    if p.m() < 2 {
        return Err(Error::InvalidParams {
            n: p.n(),
            m: p.m(),
            reason: "compact peaked waves need m >= 2",
        });
    }
    if !(c > 0.0) {
        return Err(Error::Domain {
            name: "c",
            value: c,
            reason: "wave speed must be positive",
        });
    }
    Ok(classify(p.m(), c))
}

fn classify(m: u32, c: f64) -> EdgeBehavior {
    let edge = match m {
        0..=2 => Curvature::Vanishing,
        3 => Curvature::Finite(sqrt(c / 6.0)),
        _ => Curvature::Divergent,
    };
    EdgeBehavior {
        edge,
        peak: Curvature::Divergent,
    }
}

/// KdV solitary wave `3c sech²(√c ξ / 2)`, the `(1, 1)` reference solution.
pub fn kdv_soliton(c: f64, xi: f64) -> f64 {
    let ch = cosh(0.5 * sqrt(c) * xi);
    3.0 * c / (ch * ch)
}

/// `d/dξ` of [`kdv_soliton`].
pub fn kdv_soliton_slope(c: f64, xi: f64) -> f64 {
    let arg = 0.5 * sqrt(c) * xi;
    let ch = cosh(arg);
    let th = libm::tanh(arg);
    -3.0 * c * sqrt(c) * th / (ch * ch)
}
