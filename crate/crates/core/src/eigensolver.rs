//! Independent numerical spectrum: the half-line operator
//! `H = -hbar w [ d/dy (y d/dy) - lambda^2 / y - y / 4 + a ]`
//! discretised on a uniform grid with Dirichlet ends, and its lowest
//! eigenvalues by Sturm-sequence bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MomentumGrid;
use crate::params::Model;
use crate::quantize::hamiltonian_matrix;
use crate::susy::spectrum_of;

pub const MIN_POINTS: usize = 500;
pub const MAX_EIGENVALUES: usize = 10;
pub const MAX_LEVEL: usize = 5;
/// Bisection stops once the bracket is this narrow.
pub const BRACKET_TOLERANCE: f64 = 1e-10;
const BISECTION_BUDGET: usize = 200;
/// `ln` of the allowed tail `y^(2 lambda + 2n) e^-y` at `y_max` relative to its peak.
const TAIL_LOG_BOUND: f64 = -40.0;

/// Interior points `y_i = i h`, `i = 1..=n`, with `h = y_max / (n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YGrid {
    pub y_max: f64,
    pub n: usize,
}

impl YGrid {
    pub fn new(y_max: f64, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::InvalidParameter(format!("y grid needs at least {MIN_POINTS} points, got {n}")));
        }
        if !(y_max > 0.0 && y_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("y_max must be > 0, got {y_max}")));
        }
        Ok(Self { y_max, n })
    }

    pub fn spacing(&self) -> f64 {
        self.y_max / (self.n + 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.spacing()
    }

    /// Same interval, half the spacing.
    pub fn refined(&self) -> Self {
        Self { y_max: self.y_max, n: 2 * self.n + 1 }
    }

    /// Same spacing, interval stretched by `factor` (rounded to whole steps).
    pub fn extended(&self, factor: f64) -> Self {
        let h = self.spacing();
        let steps = (self.y_max * factor / h).round() as usize;
        Self { y_max: steps as f64 * h, n: steps - 1 }
    }

    /// Whether `y_max` lies far enough in the tail of `y^(2 lambda + 2 n) e^-y`.
    pub fn encloses(&self, lambda: f64, n_target: usize) -> bool {
        let m = 2.0 * lambda + 2.0 * n_target as f64;
        if self.y_max <= m {
            return false;
        }
        let log_weight = |y: f64| m * y.ln() - y;
        let peak = if m > 0.0 { log_weight(m) } else { 0.0 };
        log_weight(self.y_max) - peak < TAIL_LOG_BOUND
    }
}

/// Symmetric tridiagonal matrix. `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    /// Energy unit `hbar w` the entries carry.
    pub scale: f64,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, scale: f64) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off, scale })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `T x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Conservative discretisation of the `y`-form operator.
pub fn build_operator(model: &Model, grid: &YGrid) -> Result<TridiagonalOperator> {
    let d = model
        .derived()
        .ok_or_else(|| Error::InvalidParameter("the y-form operator needs k > 0".into()))?;
    if !(d.lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be > 0, got {}", d.lambda)));
    }
    if !grid.encloses(d.lambda, 0) {
        return Err(Error::InvalidParameter(format!(
            "y_max = {} does not enclose the ground state for lambda = {}",
            grid.y_max, d.lambda
        )));
    }
    let hw = model.hbar_omega();
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let lambda2 = d.lambda * d.lambda;
    let off = (0..grid.n - 1).map(|i| -hw * (grid.point(i) + 0.5 * h) * inv_h2).collect();
    let diag = (0..grid.n)
        .map(|i| {
            let y = grid.point(i);
            let flux = (y - 0.5 * h) + (y + 0.5 * h);
            hw * (flux * inv_h2 + lambda2 / y + 0.25 * y - d.a_script)
        })
        .collect();
    TridiagonalOperator::new(diag, off, hw)
}

/// The momentum-space operator of the quantum Hamiltonian, interior points
/// of `grid` with Dirichlet ends. Serves the harmonic branch and as a second
/// discretisation of the deformed problem.
pub fn build_momentum_operator(model: &Model, grid: &MomentumGrid) -> Result<TridiagonalOperator> {
    let (diag, off) = hamiltonian_matrix(model, grid)?;
    let inner = off[1..off.len() - 1].to_vec();
    TridiagonalOperator::new(diag, inner, model.hbar_omega())
}

/// Number of eigenvalues strictly below `x` (negative pivots of `T - x`).
pub fn sturm_count(op: &TridiagonalOperator, x: f64) -> usize {
    let guard = f64::EPSILON * (op.gershgorin().1.abs() + x.abs()).max(f64::MIN_POSITIVE);
    let mut count = 0;
    let mut pivot = op.diag[0] - x;
    for i in 0..op.dim() {
        if i > 0 {
            pivot = (op.diag[i] - x) - op.off[i - 1] * op.off[i - 1] / pivot;
        }
        if pivot.abs() < guard {
            pivot = -guard;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, count: usize) -> Result<Vec<f64>> {
    if count > MAX_EIGENVALUES || count > op.dim() {
        return Err(Error::InvalidParameter(format!(
            "can extract at most {} eigenvalues here, asked for {count}",
            MAX_EIGENVALUES.min(op.dim())
        )));
    }
    let (lo, hi) = op.gershgorin();
    let pad = 1e-9 * (hi - lo).abs().max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let mut values = Vec::with_capacity(count);
    let mut floor = lo;
    for index in 0..count {
        let (mut a, mut b) = (floor, hi);
        let mut converged = false;
        for _ in 0..BISECTION_BUDGET {
            if b - a <= BRACKET_TOLERANCE {
                converged = true;
                break;
            }
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                converged = true;
                break;
            }
            if sturm_count(op, mid) > index {
                b = mid;
            } else {
                a = mid;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { index, iterations: BISECTION_BUDGET });
        }
        let value = 0.5 * (a + b);
        values.push(value);
        floor = a;
    }
    Ok(values)
}

/// Unit eigenvector for a computed eigenvalue by inverse iteration.
pub fn eigenvector(op: &TridiagonalOperator, eigenvalue: f64) -> Result<Vec<f64>> {
    let n = op.dim();
    let shift = eigenvalue + 1e-10 * eigenvalue.abs().max(1.0);
    let lu = ShiftedLu::factor(op, shift);
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i % 7) as f64)).collect();
    for _ in 0..4 {
        lu.solve(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonConvergence { index: 0, iterations: 4 });
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    // fix the overall sign: first significant component positive
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-6 * peak) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Ok(x)
}

/// LU factors of `T - shift` with partial pivoting (one extra superdiagonal).
struct ShiftedLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(op: &TridiagonalOperator, shift: f64) -> Self {
        let n = op.dim();
        let mut lower = op.off.clone();
        let mut diag: Vec<f64> = op.diag.iter().map(|d| d - shift).collect();
        let mut upper = op.off.clone();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i] != 0.0 {
                    let fact = lower[i] / diag[i];
                    lower[i] = fact;
                    diag[i + 1] -= fact * upper[i];
                }
            } else {
                let fact = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = fact;
                let temp = upper[i];
                upper[i] = diag[i + 1];
                diag[i + 1] = temp - fact * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper[i + 1];
                    upper[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * op.gershgorin().1.abs().max(1.0);
        for d in &mut diag {
            if d.abs() < tiny {
                *d = tiny;
            }
        }
        Self { lower, diag, upper, upper2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.lower[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub n: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_error: f64,
    /// Same level on the grid with half the spacing.
    pub refined_numeric: f64,
    pub refined_error: f64,
}

impl LevelCheck {
    pub fn convergence_ratio(&self) -> f64 {
        self.abs_error / self.refined_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub levels: Vec<LevelCheck>,
    /// Ratio of the largest coarse-grid error to the largest refined-grid one.
    pub convergence_ratio: f64,
    pub grid: YGrid,
}

impl SpectrumCheck {
    pub fn max_error(&self) -> f64 {
        self.levels.iter().fold(0.0, |m, l| m.max(l.abs_error))
    }

    /// Largest `|(e_{n+1} - e_n) - hbar w|` among the numeric levels.
    pub fn max_spacing_deviation(&self, hbar_omega: f64) -> f64 {
        self.levels
            .windows(2)
            .map(|w| (w[1].numeric - w[0].numeric - hbar_omega).abs())
            .fold(0.0, f64::max)
    }
}

fn solve_levels(model: &Model, grid: &YGrid, count: usize) -> Result<Vec<f64>> {
    if model.is_harmonic() {
        let p_grid = MomentumGrid::for_states_with_intervals(model, count, grid.n + 1)?;
        lowest_eigenvalues(&build_momentum_operator(model, &p_grid)?, count)
    } else {
        lowest_eigenvalues(&build_operator(model, grid)?, count)
    }
}

/// Solve on `grid` and on its refinement, and pair both with the closed-form spectrum.
///
/// On the harmonic branch the momentum-space operator is used with as many
/// points as `grid`.
pub fn verify_spectrum(model: &Model, n_max: usize, grid: &YGrid) -> Result<SpectrumCheck> {
    if n_max > MAX_LEVEL {
        return Err(Error::InvalidParameter(format!("levels above {MAX_LEVEL} are not checked, got {n_max}")));
    }
    if let Some(d) = model.derived() {
        if !grid.encloses(d.lambda, n_max) {
            return Err(Error::InvalidParameter(format!(
                "y_max = {} too small for lambda = {} and n = {n_max}",
                grid.y_max, d.lambda
            )));
        }
    }
    let exact = spectrum_of(model, n_max);
    let coarse = solve_levels(model, grid, n_max + 1)?;
    let fine = solve_levels(model, &grid.refined(), n_max + 1)?;
    let levels: Vec<LevelCheck> = exact
        .levels
        .iter()
        .zip(coarse.iter().zip(&fine))
        .map(|(level, (&numeric, &refined))| LevelCheck {
            n: level.n,
            analytic: level.energy,
            numeric,
            abs_error: (numeric - level.energy).abs(),
            refined_numeric: refined,
            refined_error: (refined - level.energy).abs(),
        })
        .collect();
    let coarse_max = levels.iter().fold(0.0f64, |m, l| m.max(l.abs_error));
    let fine_max = levels.iter().fold(0.0f64, |m, l| m.max(l.refined_error));
    Ok(SpectrumCheck { levels, convergence_ratio: coarse_max / fine_max, grid: *grid })
}
