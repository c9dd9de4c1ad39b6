//! Uniform momentum grids and functions sampled on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Model, PhysicalParams};

/// Smallest number of intervals a grid may have.
pub const MIN_INTERVALS: usize = 16;

/// Uniform points `p_i = start + i h`, `i = 0..len`, all strictly below the
/// momentum bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    start: f64,
    spacing: f64,
    len: usize,
}

impl MomentumGrid {
    /// `intervals + 1` points from `start` to `end` inclusive.
    pub fn new(phys: &PhysicalParams, start: f64, end: f64, intervals: usize) -> Result<Self> {
        if intervals < MIN_INTERVALS {
            return Err(Error::InvalidParameter(format!(
                "a momentum grid needs at least {MIN_INTERVALS} intervals, got {intervals}"
            )));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidParameter(format!("invalid momentum range [{start}, {end}]")));
        }
        phys.check_momentum(end)?;
        Ok(Self { start, spacing: (end - start) / intervals as f64, len: intervals + 1 })
    }

    /// Grid from `start` with spacing `h`, extended up to (at most) `end`.
    pub fn with_spacing(phys: &PhysicalParams, start: f64, end: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid spacing must be > 0, got {h}")));
        }
        let intervals = ((end - start) / h + 1e-9).floor() as usize;
        if intervals < MIN_INTERVALS {
            return Err(Error::InvalidParameter(format!("spacing {h} too coarse for [{start}, {end}]")));
        }
        let last = start + intervals as f64 * h;
        phys.check_momentum(last)?;
        Ok(Self { start, spacing: h, len: intervals + 1 })
    }

    /// Window on which the first `n_max + 1` eigenstates live, sampled with
    /// spacing `h`: `y` from `0.03 lambda` up to `2 lambda + 40 n_max + 80`
    /// for the deformed model, `|p| <= sqrt(hbar w) (sqrt(2 n_max + 1) + 9)`
    /// for the harmonic one.
    pub fn for_states(model: &Model, n_max: usize, h: f64) -> Result<Self> {
        let (lo, hi) = state_window(model, n_max);
        Self::with_spacing(&model.phys, lo, hi, h)
    }

    /// Like [`MomentumGrid::for_states`] but with a fixed number of intervals.
    pub fn for_states_with_intervals(model: &Model, n_max: usize, intervals: usize) -> Result<Self> {
        let (lo, hi) = state_window(model, n_max);
        Self::new(&model.phys, lo, hi, intervals)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    /// The grid without its two end points.
    pub fn interior(&self) -> Self {
        Self { start: self.start + self.spacing, spacing: self.spacing, len: self.len.saturating_sub(2) }
    }

    /// Same span, half the spacing.
    pub fn refined(&self) -> Self {
        Self { start: self.start, spacing: 0.5 * self.spacing, len: 2 * self.len - 1 }
    }

    pub fn sample<F: FnMut(f64) -> Result<f64>>(&self, mut f: F) -> Result<SampledFunction> {
        let values = self.points().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction { grid: *self, values })
    }
}

fn state_window(model: &Model, n_max: usize) -> (f64, f64) {
    match model.derived() {
        Some(d) => {
            let y_lo = 0.03 * d.lambda;
            let y_hi = 2.0 * d.lambda + 40.0 * n_max as f64 + 80.0;
            (model.p_of_y(y_hi).unwrap(), model.p_of_y(y_lo).unwrap().min(d.p_max * (1.0 - 1e-9)))
        }
        None => {
            let half = model.hbar_omega().sqrt() * ((2.0 * n_max as f64 + 1.0).sqrt() + 9.0);
            (-half, half)
        }
    }
}

/// Values of a real function on a [`MomentumGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub grid: MomentumGrid,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: MomentumGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoidal inner product on a shared grid.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("inner product of functions on different grids".into()));
        }
        let n = self.values.len();
        let mut total: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        total -= 0.5 * (self.values[0] * other.values[0] + self.values[n - 1] * other.values[n - 1]);
        Ok(total * self.grid.spacing())
    }

    /// Drop the end points.
    pub fn interior(&self) -> Self {
        let n = self.values.len();
        Self { grid: self.grid.interior(), values: self.values[1..n - 1].to_vec() }
    }

    /// Number of sign changes, ignoring exact zeros and values below `floor`.
    pub fn sign_changes(&self, floor: f64) -> usize {
        let mut last = 0.0f64;
        let mut count = 0;
        for &v in &self.values {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }
}

/// Cosine similarity of two sample vectors.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
