use alloc::vec::Vec;

use super::{Grid, State};
use crate::math::{exp, sqrt};
use crate::{Error, Result};

/// Location (modulo `L`) and height of the maximum, refined by the parabola
/// through the largest sample and its two periodic neighbours.
pub fn track_peak(state: &State, grid: &Grid) -> Result<(f64, f64)> {
    let u = &state.values;
    if u.len() != grid.npoints() {
        return Err(Error::LengthMismatch {
            expected: grid.npoints(),
            got: u.len(),
        });
    }
    let (mut jmax, mut top, mut bottom) = (0, f64::NEG_INFINITY, f64::INFINITY);
    for (j, &v) in u.iter().enumerate() {
        if v > top {
            top = v;
            jmax = j;
        }
        bottom = bottom.min(v);
    }
    let scale = top.abs().max(bottom.abs());
    if !(top - bottom > 1e-12 * scale) || scale == 0.0 {
        return Err(Error::DegenerateState);
    }
    let n = u.len();
    let left = u[(jmax + n - 1) % n];
    let right = u[(jmax + 1) % n];
    let curvature = left - 2.0 * top + right;
    let (offset, height) = if curvature < 0.0 {
        let d = 0.5 * (left - right) / curvature;
        (d, top - 0.25 * (left - right) * d)
    } else {
        (0.0, top)
    };
    let location = grid.wrap((jmax as f64 + offset) * grid.spacing());
    Ok((location, height))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mollified {
    pub values: Vec<f64>,
    /// `max_j |mollified − original|`.
    pub max_change: f64,
    /// Discrete L² norm of the change.
    pub l2_change: f64,
}

/// Periodic convolution with a normalized Gaussian of standard deviation
/// `width`, truncated at four widths. The weights sum to one, so the discrete
/// mass is preserved.
pub fn mollify(values: &[f64], grid: &Grid, width: f64) -> Mollified {
    let h = grid.spacing();
    let n = values.len();
    if !(width > 0.0) || n == 0 {
        return Mollified {
            values: values.to_vec(),
            max_change: 0.0,
            l2_change: 0.0,
        };
    }
    let reach = ((4.0 * width / h) as usize).max(1).min(n / 2);
    let mut kernel: Vec<f64> = (0..=reach)
        .map(|i| {
            let x = i as f64 * h / width;
            exp(-0.5 * x * x)
        })
        .collect();
    let total = kernel[0] + 2.0 * kernel[1..].iter().sum::<f64>();
    for w in kernel.iter_mut() {
        *w /= total;
    }
    let out: Vec<f64> = (0..n)
        .map(|j| {
            let mut acc = kernel[0] * values[j];
            for (i, &w) in kernel.iter().enumerate().skip(1) {
                acc += w * (values[(j + i) % n] + values[(j + n - i) % n]);
            }
            acc
        })
        .collect();
    let mut max_change = 0.0f64;
    let mut sq = 0.0;
    for (a, b) in out.iter().zip(values) {
        let d = a - b;
        max_change = max_change.max(d.abs());
        sq += d * d;
    }
    Mollified {
        values: out,
        max_change,
        l2_change: sqrt(sq * h),
    }
}
