//! Discrete conserved functionals on periodic grid states.
//!
//! All integrals use the periodic rectangle rule `h Σ f_j`, which is
//! spectrally accurate for smooth periodic integrands and second order for
//! integrands with kinks such as the edges of compact waves. The box should
//! be wide enough that the wave sits well inside it (`L ≥ 6 ξ0` for
//! peakompactons).

use alloc::vec::Vec;

use crate::math::powi;
use crate::model::{hamiltonian_density, HierarchyParams};
use crate::simulate::{energy_with, track_peak, Grid, Scheme, SpatialOperator, State};
use crate::{Error, Result};

fn sum_pow(values: &[f64], k: u32) -> f64 {
    values.iter().map(|&u| powi(u, k)).sum()
}

/// `I_k = ∫ u^k dx`.
pub fn ik(state: &State, grid: &Grid, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain {
            name: "k",
            value: 0.0,
            reason: "I_k needs k >= 1",
        });
    }
    Ok(sum_pow(&state.values, k) * grid.spacing())
}

/// Total wave mass `M = ½ ∫ u dx = ½ I_1`.
pub fn mass(state: &State, grid: &Grid) -> f64 {
    0.5 * (sum_pow(&state.values, 1) * grid.spacing())
}

/// Total wave momentum `P = −½ ∫ u² dx = −½ I_2`.
pub fn momentum(state: &State, grid: &Grid) -> f64 {
    -0.5 * (sum_pow(&state.values, 2) * grid.spacing())
}

/// Total wave energy `H = ∫ [−u^(n+2)/((n+2)(n+1)) + (u_x)^(m+1)/(m+1)] dx`
/// with `u_x` from the given scheme.
pub fn energy(state: &State, grid: &Grid, p: HierarchyParams, scheme: Scheme) -> Result<f64> {
    let mut op = SpatialOperator::new(*grid, scheme)?;
    energy_with(&mut op, state, p)
}

pub(crate) fn energy_from_slope(u: &[f64], ux: &[f64], h: f64, p: HierarchyParams) -> f64 {
    u.iter().zip(ux).map(|(&a, &b)| hamiltonian_density(a, b, p)).sum::<f64>() * h
}

/// `I_k(t)` for one order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IkSeries {
    pub k: u32,
    pub values: Vec<f64>,
}

/// Time series of the conserved functionals and the tracked peak.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub momentum: Vec<f64>,
    pub energy: Vec<f64>,
    pub ik: Vec<IkSeries>,
    /// `(location, height)`; `None` for flat states.
    pub peak: Vec<Option<(f64, f64)>>,
}

impl DiagnosticsRecord {
    pub fn new(ik_orders: &[u32]) -> Self {
        Self {
            ik: ik_orders
                .iter()
                .map(|&k| IkSeries {
                    k,
                    values: Vec::new(),
                })
                .collect(),
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub(crate) fn push(&mut self, op: &mut SpatialOperator, state: &State, p: HierarchyParams) -> Result<()> {
        let grid = *op.grid();
        let energy = energy_with(op, state, p)?;
        self.times.push(state.time);
        self.mass.push(mass(state, &grid));
        self.momentum.push(momentum(state, &grid));
        self.energy.push(energy);
        for series in &mut self.ik {
            series.values.push(ik(state, &grid, series.k)?);
        }
        self.peak.push(track_peak(state, &grid).ok());
        Ok(())
    }

    pub fn ik_series(&self, k: u32) -> Option<&[f64]> {
        self.ik.iter().find(|s| s.k == k).map(|s| s.values.as_slice())
    }

    pub fn drift(&self) -> DriftSummary {
        let ik = self.ik.iter().map(|s| (s.k, relative_drift(&s.values))).collect();
        DriftSummary {
            mass: relative_drift(&self.mass),
            momentum: relative_drift(&self.momentum),
            energy: relative_drift(&self.energy),
            ik,
        }
    }
}

/// `max_t |q(t) − q(0)| / |q(0)|`; absolute when `q(0) = 0`.
pub fn relative_drift(series: &[f64]) -> f64 {
    let Some(&first) = series.first() else {
        return 0.0;
    };
    let worst = series.iter().fold(0.0f64, |a, &q| a.max((q - first).abs()));
    if first == 0.0 {
        worst
    } else {
        worst / first.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSummary {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub ik: Vec<(u32, f64)>,
}
