//! Hierarchy parameters, variational densities and the scaling transform.
//!
//! All canonical quantities are dimensionless. A member of the hierarchy is
//! identified by the integer pair `(n, m)`: `n` is the advective exponent and
//! `m` the dispersive exponent. `(1, 1)` is KdV.

use crate::math::{powf, powi};
use crate::{Error, Result};

/// One member `(n, m)` of the K#(n,m) hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HierarchyParams {
    n: u32,
    m: u32,
}

impl HierarchyParams {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParams {
                n,
                m,
                reason: "both exponents must be at least 1",
            });
        }
        Ok(Self { n, m })
    }

    /// The KdV member `(1, 1)`.
    pub const KDV: Self = Self { n: 1, m: 1 };

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `1 / ((n + 2)(n + 1))`, the weight of the advective term in both densities.
    #[inline]
    pub(crate) fn advective_weight(&self) -> f64 {
        let n = f64::from(self.n);
        1.0 / ((n + 2.0) * (n + 1.0))
    }
}

/// Lagrangian density `½ φ_x φ_t + φ_x^(n+2)/((n+2)(n+1)) − φ_xx^(m+1)/(m+1)`.
pub fn lagrangian_density(phi_x: f64, phi_t: f64, phi_xx: f64, p: HierarchyParams) -> f64 {
    0.5 * phi_x * phi_t + powi(phi_x, p.n + 2) * p.advective_weight()
        - powi(phi_xx, p.m + 1) / f64::from(p.m + 1)
}

/// Hamiltonian (energy) density `−u^(n+2)/((n+2)(n+1)) + u_x^(m+1)/(m+1)`,
/// written in terms of `u = φ_x`.
pub fn hamiltonian_density(u: f64, u_x: f64, p: HierarchyParams) -> f64 {
    -powi(u, p.n + 2) * p.advective_weight() + powi(u_x, p.m + 1) / f64::from(p.m + 1)
}

/// Coefficients and characteristic scales of the dimensional form
/// `u_t + ε u^n u_x + δ [(u_x)^m]_xx = 0`.
///
/// The rescaling `x ↦ x/ℓ, t ↦ t/τ, u ↦ u/V` maps it to the canonical form
/// exactly when `ε = ℓ/(τ V^n)` and `δ = ℓ^(m+2)/(τ V^(m−1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalForm {
    pub epsilon: f64,
    pub delta: f64,
    pub ell: f64,
    pub tau: f64,
    pub vee: f64,
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

/// Solves for `(ℓ, τ)` given `(ε, δ)` and a caller-chosen velocity scale `V`.
///
/// Two relations fix three scales, so `V` is an input (use `1.0` when there
/// is no preferred choice). Eliminating `τ` gives
/// `ℓ^(m+1) = (δ/ε) V^(m−1−n)` and then `τ = ℓ/(ε V^n)`.
pub fn scales_from_coefficients(
    epsilon: f64,
    delta: f64,
    p: HierarchyParams,
    vee: f64,
) -> Result<DimensionalForm> {
    require_positive("epsilon", epsilon)?;
    require_positive("delta", delta)?;
    require_positive("vee", vee)?;
    let (n, m) = (f64::from(p.n), f64::from(p.m));
    let ell = powf((delta / epsilon) * powf(vee, m - 1.0 - n), 1.0 / (m + 1.0));
    let tau = ell / (epsilon * powf(vee, n));
    Ok(DimensionalForm {
        epsilon,
        delta,
        ell,
        tau,
        vee,
    })
}

/// Evaluates `(ε, δ)` from the scales stored in `d`; `d.epsilon` and
/// `d.delta` are ignored.
pub fn coefficients_from_scales(d: &DimensionalForm, p: HierarchyParams) -> Result<(f64, f64)> {
    require_positive("ell", d.ell)?;
    require_positive("tau", d.tau)?;
    require_positive("vee", d.vee)?;
    let epsilon = d.ell / (d.tau * powi(d.vee, p.n));
    let delta = powi(d.ell, p.m + 2) / (d.tau * powi(d.vee, p.m - 1));
    Ok((epsilon, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hp(n: u32, m: u32) -> HierarchyParams {
        HierarchyParams::new(n, m).unwrap()
    }

    #[test]
    fn rejects_zero_exponents() {
        assert!(HierarchyParams::new(0, 1).is_err());
        assert!(HierarchyParams::new(1, 0).is_err());
        assert_eq!(HierarchyParams::new(1, 1).unwrap(), HierarchyParams::KDV);
    }

    #[test]
    fn lagrangian_values() {
        assert_eq!(lagrangian_density(0.0, 0.0, 0.0, hp(3, 4)), 0.0);
        assert_relative_eq!(lagrangian_density(1.0, 0.0, 0.0, hp(1, 1)), 1.0 / 6.0);
        // ½ + 1/12 − ¼
        assert_relative_eq!(
            lagrangian_density(1.0, 1.0, 1.0, hp(2, 3)),
            1.0 / 3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hamiltonian_values() {
        assert_eq!(hamiltonian_density(0.0, 0.0, hp(2, 2)), 0.0);
        assert_relative_eq!(hamiltonian_density(1.0, 0.0, hp(1, 1)), -1.0 / 6.0);
        // −16/12 + 1/4
        assert_relative_eq!(
            hamiltonian_density(2.0, 1.0, hp(2, 3)),
            -13.0 / 12.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn scaling_examples() {
        let d = scales_from_coefficients(1.0, 1.0, hp(1, 1), 1.0).unwrap();
        assert_relative_eq!(d.ell, 1.0);
        assert_relative_eq!(d.tau, 1.0);

        let d = scales_from_coefficients(6.0, 1.0, hp(1, 1), 1.0).unwrap();
        let ell = (1.0f64 / 6.0).sqrt();
        assert_relative_eq!(d.ell, ell, max_relative = 1e-15);
        assert_relative_eq!(d.tau, ell / 6.0, max_relative = 1e-15);
        let (e, dl) = coefficients_from_scales(&d, hp(1, 1)).unwrap();
        assert_relative_eq!(e, 6.0, max_relative = 1e-12);
        assert_relative_eq!(dl, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn coefficient_examples() {
        let unit = DimensionalForm {
            epsilon: 0.0,
            delta: 0.0,
            ell: 1.0,
            tau: 1.0,
            vee: 1.0,
        };
        assert_eq!(coefficients_from_scales(&unit, hp(2, 5)).unwrap(), (1.0, 1.0));
        let d = DimensionalForm { ell: 2.0, ..unit };
        assert_eq!(coefficients_from_scales(&d, hp(1, 1)).unwrap(), (2.0, 8.0));
    }

    #[test]
    fn scaling_rejects_non_positive() {
        assert!(scales_from_coefficients(0.0, 1.0, hp(1, 1), 1.0).is_err());
        assert!(scales_from_coefficients(1.0, -1.0, hp(1, 1), 1.0).is_err());
        assert!(scales_from_coefficients(1.0, 1.0, hp(1, 1), 0.0).is_err());
        assert!(scales_from_coefficients(f64::NAN, 1.0, hp(1, 1), 1.0).is_err());
        let bad = DimensionalForm {
            epsilon: 1.0,
            delta: 1.0,
            ell: -1.0,
            tau: 1.0,
            vee: 1.0,
        };
        assert!(coefficients_from_scales(&bad, hp(1, 1)).is_err());
    }

    #[test]
    fn dispersive_coefficient_depends_on_vee_for_m_above_one() {
        // δ carries V^(m−1); with m = 3 doubling V at fixed ℓ, τ quarters δ.
        let base = DimensionalForm {
            epsilon: 0.0,
            delta: 0.0,
            ell: 1.5,
            tau: 0.7,
            vee: 1.0,
        };
        let doubled = DimensionalForm { vee: 2.0, ..base };
        let (_, d1) = coefficients_from_scales(&base, hp(1, 3)).unwrap();
        let (_, d2) = coefficients_from_scales(&doubled, hp(1, 3)).unwrap();
        assert_relative_eq!(d1 / d2, 4.0, max_relative = 1e-14);
    }
}
