//! Periodic spatial derivatives and the method-of-lines right-hand side.

use alloc::vec;
use alloc::vec::Vec;

use super::{Grid, Scheme, SolverConfig};
use crate::math::powi;
use crate::model::HierarchyParams;
use crate::{Error, Result};

/// Spatial discretization bound to one grid, with cached FFT plans when the
/// spectral scheme is selected.
pub struct SpatialOperator {
    grid: Grid,
    scheme: Scheme,
    #[cfg(feature = "std")]
    spectral: Option<spectral::Spectral>,
}

impl core::fmt::Debug for SpatialOperator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SpatialOperator")
            .field("grid", &self.grid)
            .field("scheme", &self.scheme)
            .finish()
    }
}

impl SpatialOperator {
    pub fn new(grid: Grid, scheme: Scheme) -> Result<Self> {
        match scheme {
            Scheme::CenteredFd4 => Ok(Self {
                grid,
                scheme,
                #[cfg(feature = "std")]
                spectral: None,
            }),
            #[cfg(feature = "std")]
            Scheme::FourierCollocation => Ok(Self {
                grid,
                scheme,
                spectral: Some(spectral::Spectral::new(&grid)),
            }),
            #[cfg(not(feature = "std"))]
            Scheme::FourierCollocation => Err(Error::SchemeUnavailable),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.grid.npoints() {
            return Err(Error::LengthMismatch {
                expected: self.grid.npoints(),
                got: values.len(),
            });
        }
        Ok(())
    }

    /// First or second periodic derivative of `values`.
    pub fn derivative(&mut self, values: &[f64], order: u32) -> Result<Vec<f64>> {
        if order != 1 && order != 2 {
            return Err(Error::UnsupportedOrder(order));
        }
        self.check_len(values)?;
        match self.scheme {
            Scheme::CenteredFd4 => Ok(if order == 1 {
                fd4_first(values, self.grid.spacing())
            } else {
                fd4_second(values, self.grid.spacing())
            }),
            Scheme::FourierCollocation => self.spectral_derivative(values, order),
        }
    }

    #[cfg(feature = "std")]
    fn spectral_derivative(&mut self, values: &[f64], order: u32) -> Result<Vec<f64>> {
        let sp = self.spectral.as_mut().ok_or(Error::SchemeUnavailable)?;
        let mut spec = sp.forward(values);
        sp.apply_derivative(&mut spec, order);
        Ok(sp.inverse(spec))
    }

    #[cfg(not(feature = "std"))]
    fn spectral_derivative(&mut self, _values: &[f64], _order: u32) -> Result<Vec<f64>> {
        Err(Error::SchemeUnavailable)
    }

    /// Projects `values` onto the modes kept by the two-thirds rule. A no-op
    /// for the finite-difference scheme.
    pub fn project(&mut self, values: &[f64]) -> Result<Vec<f64>> {
        self.check_len(values)?;
        match self.scheme {
            Scheme::CenteredFd4 => Ok(values.to_vec()),
            Scheme::FourierCollocation => self.spectral_project(values),
        }
    }

    #[cfg(feature = "std")]
    fn spectral_project(&mut self, values: &[f64]) -> Result<Vec<f64>> {
        let sp = self.spectral.as_mut().ok_or(Error::SchemeUnavailable)?;
        let mut spec = sp.forward(values);
        sp.truncate(&mut spec);
        Ok(sp.inverse(spec))
    }

    #[cfg(not(feature = "std"))]
    fn spectral_project(&mut self, _values: &[f64]) -> Result<Vec<f64>> {
        Err(Error::SchemeUnavailable)
    }

    /// `−uⁿ u_x − D²[(u_x)^m] − ν D⁴u`.
    ///
    /// Every term is assembled as `A + D B + D² C` from pointwise products
    /// (see [`NonlinearForm`]). With `dealias` (spectral only) the spectrum of
    /// the sum is truncated by the two-thirds rule.
    pub fn rhs(&mut self, u: &[f64], p: HierarchyParams, config: &SolverConfig) -> Result<Vec<f64>> {
        self.check_len(u)?;
        match self.scheme {
            Scheme::CenteredFd4 => {
                let h = self.grid.spacing();
                let ux = fd4_first(u, h);
                let uxx = match config.form {
                    NonlinearForm::Primitive => Vec::new(),
                    NonlinearForm::SkewSymmetric => fd4_first(&ux, h),
                };
                let terms = Terms::assemble(u, &ux, &uxx, p, config);
                let mut out = terms.a;
                if let Some(b) = &terms.b {
                    for (o, db) in out.iter_mut().zip(fd4_first(b, h)) {
                        *o += db;
                    }
                }
                let dc = match config.form {
                    NonlinearForm::Primitive => fd4_second(&terms.c, h),
                    NonlinearForm::SkewSymmetric => fd4_first(&fd4_first(&terms.c, h), h),
                };
                for (o, c) in out.iter_mut().zip(&dc) {
                    *o += c;
                }
                if config.smoothing > 0.0 {
                    let hyper = fd4_second(&fd4_second(u, h), h);
                    for (o, hv) in out.iter_mut().zip(&hyper) {
                        *o -= config.smoothing * hv;
                    }
                }
                Ok(out)
            }
            Scheme::FourierCollocation => self.spectral_rhs(u, p, config),
        }
    }

    #[cfg(feature = "std")]
    fn spectral_rhs(&mut self, u: &[f64], p: HierarchyParams, config: &SolverConfig) -> Result<Vec<f64>> {
        let sp = self.spectral.as_mut().ok_or(Error::SchemeUnavailable)?;
        let u_hat = sp.forward(u);
        let mut ux_hat = u_hat.clone();
        sp.apply_derivative(&mut ux_hat, 1);
        let uxx = match config.form {
            NonlinearForm::Primitive => Vec::new(),
            NonlinearForm::SkewSymmetric => {
                let mut uxx_hat = ux_hat.clone();
                sp.apply_derivative(&mut uxx_hat, 1);
                sp.inverse(uxx_hat)
            }
        };
        let ux = sp.inverse(ux_hat);
        let terms = Terms::assemble(u, &ux, &uxx, p, config);

        let mut out = sp.forward(&terms.a);
        if let Some(b) = &terms.b {
            let mut b_hat = sp.forward(b);
            sp.apply_derivative(&mut b_hat, 1);
            for (o, bh) in out.iter_mut().zip(&b_hat) {
                *o += bh;
            }
        }
        let mut c_hat = sp.forward(&terms.c);
        match config.form {
            NonlinearForm::Primitive => sp.apply_derivative(&mut c_hat, 2),
            NonlinearForm::SkewSymmetric => {
                sp.apply_derivative(&mut c_hat, 1);
                sp.apply_derivative(&mut c_hat, 1);
            }
        }
        let nu = config.smoothing;
        for (j, o) in out.iter_mut().enumerate() {
            *o += c_hat[j];
            if nu > 0.0 {
                let k2 = sp.k_squared(j);
                *o -= u_hat[j] * (nu * k2 * k2);
            }
        }
        if config.dealias {
            sp.truncate(&mut out);
        }
        Ok(sp.inverse(out))
    }

    #[cfg(not(feature = "std"))]
    fn spectral_rhs(&mut self, _u: &[f64], _p: HierarchyParams, _config: &SolverConfig) -> Result<Vec<f64>> {
        Err(Error::SchemeUnavailable)
    }
}

/// How the nonlinear terms are split between pointwise products and
/// derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NonlinearForm {
    /// `uⁿ D u` and `D²[(D u)^m]`.
    #[default]
    Primitive,
    /// `(D(uⁿ⁺¹) + uⁿ D u)/(n+2)` and `m/(m+1) · D[D(vᵐ) + vᵐ⁻¹ D v]` with
    /// `v = D u`. For any skew-symmetric `D` the semi-discrete momentum
    /// `Σ u²` is then conserved exactly.
    SkewSymmetric,
}

/// Pointwise fields of `rhs = A + D B + D² C`.
struct Terms {
    a: Vec<f64>,
    /// Absent when identically zero.
    b: Option<Vec<f64>>,
    c: Vec<f64>,
}

impl Terms {
    /// `uxx` must hold `D(ux)` for the skew-symmetric form and is ignored
    /// otherwise.
    fn assemble(u: &[f64], ux: &[f64], uxx: &[f64], p: HierarchyParams, config: &SolverConfig) -> Self {
        let (n, m) = (p.n(), p.m());
        let signed = config.signed_power;
        match config.form {
            NonlinearForm::Primitive => Self {
                a: u.iter().zip(ux).map(|(&ui, &v)| -powi(ui, n) * v).collect(),
                b: None,
                c: ux.iter().map(|&v| -dispersive_power(v, m, signed)).collect(),
            },
            NonlinearForm::SkewSymmetric => {
                let wa = 1.0 / f64::from(n + 2);
                let wd = f64::from(m) / f64::from(m + 1);
                let len = u.len();
                let (mut a, mut b, mut c) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
                for j in 0..len {
                    let un = powi(u[j], n);
                    let v = ux[j];
                    let g = if signed && m % 2 == 0 {
                        powi(v.abs(), m - 1)
                    } else {
                        powi(v, m - 1)
                    };
                    a[j] = -wa * un * v;
                    b[j] = -wa * un * u[j] - wd * g * uxx[j];
                    c[j] = -wd * g * v;
                }
                Self { a, b: Some(b), c }
            }
        }
    }
}

/// `v^m`, or `|v|^(m−1) v` when `signed` is set (only differs for even `m`).
#[inline]
pub(crate) fn dispersive_power(v: f64, m: u32, signed: bool) -> f64 {
    if signed && m.is_multiple_of(2) {
        powi(v.abs(), m - 1) * v
    } else {
        powi(v, m)
    }
}

fn fd4_first(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let scale = 1.0 / (12.0 * h);
    let mut out = vec![0.0; n];
    for (j, o) in out.iter_mut().enumerate() {
        let p1 = f[(j + 1) % n];
        let p2 = f[(j + 2) % n];
        let m1 = f[(j + n - 1) % n];
        let m2 = f[(j + n - 2) % n];
        *o = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) * scale;
    }
    out
}

fn fd4_second(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let scale = 1.0 / (12.0 * h * h);
    let mut out = vec![0.0; n];
    for (j, o) in out.iter_mut().enumerate() {
        let p1 = f[(j + 1) % n];
        let p2 = f[(j + 2) % n];
        let m1 = f[(j + n - 1) % n];
        let m2 = f[(j + n - 2) % n];
        *o = (-p2 + 16.0 * p1 - 30.0 * f[j] + 16.0 * m1 - m2) * scale;
    }
    out
}

#[cfg(feature = "std")]
mod spectral {
    use alloc::sync::Arc;
    use alloc::vec;
    use alloc::vec::Vec;

    use realfft::num_complex::Complex64;
    use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

    use crate::simulate::Grid;

    /// Real-to-complex transforms on `N` points; bin `j = 0..=N/2` holds
    /// wavenumber `j · 2π/L`.
    pub(super) struct Spectral {
        r2c: Arc<dyn RealToComplex<f64>>,
        c2r: Arc<dyn ComplexToReal<f64>>,
        real_buf: Vec<f64>,
        fwd_scratch: Vec<Complex64>,
        inv_scratch: Vec<Complex64>,
        wavenumbers: Vec<f64>,
        /// Highest bin kept by the two-thirds rule.
        cutoff: usize,
    }

    impl Spectral {
        pub(super) fn new(grid: &Grid) -> Self {
            let n = grid.npoints();
            let mut planner = RealFftPlanner::<f64>::new();
            let r2c = planner.plan_fft_forward(n);
            let c2r = planner.plan_fft_inverse(n);
            let k0 = 2.0 * core::f64::consts::PI / grid.length();
            Self {
                fwd_scratch: r2c.make_scratch_vec(),
                inv_scratch: c2r.make_scratch_vec(),
                r2c,
                c2r,
                real_buf: vec![0.0; n],
                wavenumbers: (0..=n / 2).map(|j| j as f64 * k0).collect(),
                cutoff: n / 3,
            }
        }

        pub(super) fn forward(&mut self, values: &[f64]) -> Vec<Complex64> {
            self.real_buf.copy_from_slice(values);
            let mut out = self.r2c.make_output_vec();
            self.r2c
                .process_with_scratch(&mut self.real_buf, &mut out, &mut self.fwd_scratch)
                .expect("buffers are sized by the plan");
            out
        }

        pub(super) fn inverse(&mut self, mut spec: Vec<Complex64>) -> Vec<f64> {
            let last = spec.len() - 1;
            spec[0].im = 0.0;
            spec[last].im = 0.0;
            let n = self.real_buf.len();
            let mut out = vec![0.0; n];
            self.c2r
                .process_with_scratch(&mut spec, &mut out, &mut self.inv_scratch)
                .expect("buffers are sized by the plan");
            let scale = 1.0 / n as f64;
            for v in out.iter_mut() {
                *v *= scale;
            }
            out
        }

        pub(super) fn k_squared(&self, j: usize) -> f64 {
            self.wavenumbers[j] * self.wavenumbers[j]
        }

        /// Multiplies by `(ik)^order`. The Nyquist bin is dropped for odd
        /// orders because its derivative is not real.
        pub(super) fn apply_derivative(&self, spec: &mut [Complex64], order: u32) {
            let nyquist = spec.len() - 1;
            for (j, (c, &k)) in spec.iter_mut().zip(&self.wavenumbers).enumerate() {
                if order == 1 {
                    *c = if j == nyquist {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(-k * c.im, k * c.re)
                    };
                } else {
                    *c *= -k * k;
                }
            }
        }

        /// Two-thirds rule: zero every mode with `|k| > N/3`.
        pub(super) fn truncate(&self, spec: &mut [Complex64]) {
            for c in spec.iter_mut().skip(self.cutoff + 1) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
}
