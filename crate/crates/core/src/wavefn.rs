//! Closed-form eigenfunctions `psi_n = N_n y^lambda e^{-y/2} L_n^{2 lambda}(y)`,
//! their harmonic limit and the studies of how that limit is approached.
//!
//! Everything with a large exponent is assembled as a logarithm; for
//! `k = 1e-3` the scale `a` is about `9e6`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{MomentumGrid, SampledFunction};
use crate::params::{AmbiguityParams, DerivedParams, Model, PhysicalParams};
use crate::specfun::{hermite, laguerre_assoc, ln_factorial, log_gamma, CompositeRule};

pub const MAX_OVERLAP_LEVEL: usize = 6;
pub const MAX_LIMIT_LEVEL: usize = 3;
pub const MAX_LAGUERRE_LEVEL: usize = 5;
/// Anything whose log exceeds this would overflow a double.
pub const LOG_OVERFLOW: f64 = 700.0;
/// Points sampled across the `|p| <= 4 sqrt(hbar w)` window.
pub const LIMIT_SAMPLES: usize = 801;
const QUADRATURE_ORDER: usize = 16;

/// `ln N_n`
pub fn norm_const_log(derived: &DerivedParams, hbar_omega: f64, n: usize) -> f64 {
    let two_lambda = 2.0 * derived.lambda;
    let lg = log_gamma(two_lambda + n as f64 + 1.0).expect("2 lambda + n + 1 > 0");
    0.5 * (0.5 * (derived.a_script / hbar_omega).ln() + LN_2 + ln_factorial(n as u32) - lg)
}

/// Harmonic-oscillator eigenfunction in momentum space.
pub fn lho_psi(phys: &PhysicalParams, n: usize, p: f64) -> f64 {
    let hw = phys.hbar_omega();
    let log_norm = -0.5 * (n as f64 * LN_2 + ln_factorial(n as u32) + 0.5 * (PI * hw).ln());
    let x = p / hw.sqrt();
    (log_norm - 0.5 * x * x).exp() * hermite(n, x)
}

/// An eigenstate of a fixed model, with its normalisation precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenstate {
    pub n: usize,
    pub model: Model,
    /// `ln N_n`; zero on the harmonic branch where the norm is folded into [`lho_psi`].
    pub log_norm: f64,
}

impl Eigenstate {
    pub fn new(model: &Model, n: usize) -> Self {
        let log_norm = model.derived().map_or(0.0, |d| norm_const_log(d, model.hbar_omega(), n));
        Self { n, model: *model, log_norm }
    }

    pub fn energy(&self) -> f64 {
        (self.n as f64 + 0.5 + self.model.shift()) * self.model.hbar_omega()
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        let Some(d) = self.model.derived() else {
            return Ok(lho_psi(&self.model.phys, self.n, p));
        };
        self.model.phys.check_momentum(p)?;
        let u = p / d.p_max;
        let y = 2.0 * d.a_script * (1.0 - u);
        // log_norm + lambda ln y - y/2, regrouped so the O(a) pieces cancel first
        let base = self.log_norm + d.lambda * (2.0 * d.a_script).ln() - d.a_script;
        let log_mag = base + d.lambda * (-u).ln_1p() + d.a_script * u;
        finish(log_mag, laguerre_assoc(self.n, 2.0 * d.lambda, y))
    }

    /// `psi` as a function of `y > 0`; the harmonic branch has no `y` and errors.
    pub fn eval_y(&self, y: f64) -> Result<f64> {
        let d = self
            .model
            .derived()
            .ok_or_else(|| Error::InvalidParameter("the y variable needs k > 0".into()))?;
        if !(y > 0.0) {
            return Err(Error::InvalidParameter(format!("y must be > 0, got {y}")));
        }
        let log_mag = self.log_norm + d.lambda * y.ln() - 0.5 * y;
        finish(log_mag, laguerre_assoc(self.n, 2.0 * d.lambda, y))
    }
}

fn finish(log_mag: f64, poly: f64) -> Result<f64> {
    if poly == 0.0 {
        return Ok(0.0);
    }
    let total = log_mag + poly.abs().ln();
    if total > LOG_OVERFLOW {
        return Err(Error::Overflow(format!("log |psi| = {total}")));
    }
    Ok(total.exp().copysign(poly))
}

pub fn psi(model: &Model, n: usize, p: f64) -> Result<f64> {
    Eigenstate::new(model, n).eval(p)
}

pub fn psi_of_y(model: &Model, n: usize, y: f64) -> Result<f64> {
    Eigenstate::new(model, n).eval_y(y)
}

/// `psi_n` on every point of `grid`.
pub fn sample_psi(model: &Model, n: usize, grid: &MomentumGrid) -> Result<SampledFunction> {
    let state = Eigenstate::new(model, n);
    grid.sample(|p| state.eval(p))
}

/// Gram matrix `<psi_m, psi_n>` for `m, n <= n_max`.
///
/// Deformed models integrate in `y` with the constant Jacobian `|dp/dy|`;
/// the harmonic branch integrates in `x = p / sqrt(hbar w)`.
pub fn overlap_matrix(model: &Model, n_max: usize) -> Result<Vec<Vec<f64>>> {
    if n_max > MAX_OVERLAP_LEVEL {
        return Err(Error::InvalidParameter(format!(
            "overlaps are computed up to n = {MAX_OVERLAP_LEVEL}, got {n_max}"
        )));
    }
    let states: Vec<Eigenstate> = (0..=n_max).map(|n| Eigenstate::new(model, n)).collect();
    let (rule, jacobian, values) = match model.derived() {
        Some(d) => {
            // y^(2 lambda + 2n) e^-y peaks at m with width sqrt(m); cover 12 widths each side
            let m = 2.0 * d.lambda + 2.0 * n_max as f64;
            let width = m.sqrt();
            let lo = (m - 12.0 * width - 40.0).max(0.0);
            let hi = (m + 14.0 * width + 40.0 * n_max as f64 + 100.0).max(200.0);
            let panel = 2.0 * (width / 8.0).max(1.0);
            let panels = ((hi - lo) / panel).ceil() as usize;
            let rule = CompositeRule::on_interval(lo, hi, panels, QUADRATURE_ORDER)?;
            let jacobian = d.p_max / (2.0 * d.a_script);
            let values = states
                .iter()
                .map(|s| rule.nodes.iter().map(|&y| s.eval_y(y)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            (rule, jacobian, values)
        }
        None => {
            let half = (2.0 * n_max as f64 + 1.0).sqrt() + 12.0;
            let rule = CompositeRule::on_interval(-half, half, 200, QUADRATURE_ORDER)?;
            let scale = model.hbar_omega().sqrt();
            let values = states
                .iter()
                .map(|s| rule.nodes.iter().map(|&x| s.eval(x * scale)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            (rule, scale, values)
        }
    };
    let gram = (0..=n_max)
        .map(|m| {
            (0..=n_max)
                .map(|n| {
                    jacobian * rule.weights.iter().enumerate().map(|(i, w)| w * values[m][i] * values[n][i]).sum::<f64>()
                })
                .collect()
        })
        .collect();
    Ok(gram)
}

/// `max |G - I|`
pub fn gram_defect(gram: &[Vec<f64>]) -> f64 {
    gram.iter()
        .enumerate()
        .flat_map(|(m, row)| row.iter().enumerate().map(move |(n, g)| (g - if m == n { 1.0 } else { 0.0 }).abs()))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRow {
    pub a_script: f64,
    pub n: usize,
    pub exact_log: f64,
    pub asymptotic_log: f64,
    pub rel_error: f64,
}

/// Compare `Gamma(2a + n + 1) ~ (2a)^(n+1) Gamma(2a)` with Stirling's leading
/// terms for `Gamma(2a)` against the exact value, `n = 0..=3`.
pub fn gamma_asymptotic_check(a_script_values: &[f64]) -> Result<Vec<GammaRow>> {
    let mut rows = Vec::with_capacity(4 * a_script_values.len());
    for &a in a_script_values {
        if !(a >= 10.0) {
            return Err(Error::InvalidParameter(format!("asymptotic check needs a >= 10, got {a}")));
        }
        let two_a = 2.0 * a;
        for n in 0..=3 {
            let exact_log = log_gamma(two_a + n as f64 + 1.0)?;
            let stirling = (two_a - 0.5) * two_a.ln() - two_a + 0.5 * (2.0 * PI).ln();
            let asymptotic_log = (n as f64 + 1.0) * two_a.ln() + stirling;
            let rel_error = (asymptotic_log - exact_log).exp_m1().abs();
            rows.push(GammaRow { a_script: a, n, exact_log, asymptotic_log, rel_error });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreRow {
    pub a_script: f64,
    pub scaled_laguerre: f64,
    pub hermite_target: f64,
    pub deviation: f64,
}

/// `(2 sqrt a)^-n L_n^{2a}(2a - 2 sqrt(a) x)` against `H_n(x) / (2^n n!)`.
pub fn laguerre_hermite_limit(n: usize, x: f64, a_script_values: &[f64]) -> Result<Vec<LaguerreRow>> {
    if n > MAX_LAGUERRE_LEVEL {
        return Err(Error::InvalidParameter(format!("n must be <= {MAX_LAGUERRE_LEVEL}, got {n}")));
    }
    let target = hermite(n, x) / (2f64.powi(n as i32) * ln_factorial(n as u32).exp());
    a_script_values
        .iter()
        .map(|&a| {
            if !(a > 0.0) {
                return Err(Error::InvalidParameter(format!("a must be > 0, got {a}")));
            }
            let root = a.sqrt();
            let value = laguerre_assoc(n, 2.0 * a, 2.0 * a - 2.0 * root * x) / (2.0 * root).powi(n as i32);
            Ok(LaguerreRow { a_script: a, scaled_laguerre: value, hermite_target: target, deviation: (value - target).abs() })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub k: f64,
    pub a_script: f64,
    pub deviation: f64,
}

/// `sup |psi_n(p; k) - psi_n^lho(p)|` over `|p| <= 4 sqrt(hbar w)` for each `k`.
pub fn limit_deviation(n: usize, k_values: &[f64], phys_base: &PhysicalParams, amb: &AmbiguityParams) -> Result<Vec<DeviationRow>> {
    if n > MAX_LIMIT_LEVEL {
        return Err(Error::InvalidParameter(format!("n must be <= {MAX_LIMIT_LEVEL}, got {n}")));
    }
    if k_values.iter().any(|&k| !(k > 0.0)) {
        return Err(Error::InvalidParameter("limit studies need every k > 0".into()));
    }
    if k_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("k values must be strictly decreasing".into()));
    }
    let half = 4.0 * phys_base.hbar_omega().sqrt();
    let step = 2.0 * half / (LIMIT_SAMPLES - 1) as f64;
    k_values
        .iter()
        .map(|&k| {
            let phys = PhysicalParams::new(k, phys_base.omega, phys_base.hbar)?;
            let model = Model::new(phys, *amb)?;
            let state = Eigenstate::new(&model, n);
            let mut deviation = 0.0f64;
            for i in 0..LIMIT_SAMPLES {
                let p = -half + i as f64 * step;
                deviation = deviation.max((state.eval(p)? - lho_psi(phys_base, n, p)).abs());
            }
            let a_script = model.derived().map_or(f64::INFINITY, |d| d.a_script);
            Ok(DeviationRow { k, a_script, deviation })
        })
        .collect()
}
