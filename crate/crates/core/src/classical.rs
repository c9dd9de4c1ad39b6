//! Classical Lienard oscillator `x'' + k x x' + (k^2/9) x^3 + w^2 x = 0`.
//!
//! The Lagrangian and conjugate momentum are evaluated in forms rearranged so
//! that the `9 w^4 / k^2` prefactor never multiplies a cancelling difference;
//! they stay accurate as `k -> 0` and agree with the harmonic limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub x: f64,
    pub v: f64,
}

impl OscillatorState {
    pub fn new(x: f64, v: f64) -> Self {
        Self { x, v }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> OscillatorState {
        OscillatorState::new(self.positions[i], self.velocities[i])
    }

    /// Classical energy `H(x, p(x, v))` at every sample.
    pub fn energies(&self, phys: &PhysicalParams) -> Result<Vec<f64>> {
        (0..self.len())
            .map(|i| {
                let s = self.state(i);
                hamiltonian_classical(phys, s.x, conjugate_momentum(phys, &s)?)
            })
            .collect()
    }
}

/// Left side of the phase constraint, `1 + 2kv/(3w^2) + k^2 x^2/(9w^2)`.
pub fn phase_constraint(phys: &PhysicalParams, state: &OscillatorState) -> f64 {
    1.0 + phase_excess(phys, state)
}

/// `phase_constraint - 1`, kept separate to avoid rounding at small k.
fn phase_excess(phys: &PhysicalParams, s: &OscillatorState) -> f64 {
    let w2 = phys.omega * phys.omega;
    2.0 * phys.k * s.v / (3.0 * w2) + phys.k * phys.k * s.x * s.x / (9.0 * w2)
}

fn checked_phase(phys: &PhysicalParams, s: &OscillatorState) -> Result<f64> {
    let value = phase_constraint(phys, s);
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::PhaseConstraint { x: s.x, v: s.v, value })
    }
}

pub fn lienard_rhs(phys: &PhysicalParams, s: &OscillatorState) -> f64 {
    let k = phys.k;
    -k * s.x * s.v - k * k / 9.0 * s.x.powi(3) - phys.omega * phys.omega * s.x
}

/// Closed-form periodic solution `A sin(wt+d) / (1 - (kA/3w) cos(wt+d))`.
pub fn analytic_solution(phys: &PhysicalParams, amplitude: f64, phase: f64, t: f64) -> Result<f64> {
    analytic_state(phys, amplitude, phase, t).map(|s| s.x)
}

/// Position and velocity of the closed-form solution; the velocity comes from
/// the quotient rule, `w A (cos th - c) / (1 - c cos th)^2` with `c = kA/3w`.
pub fn analytic_state(phys: &PhysicalParams, amplitude: f64, phase: f64, t: f64) -> Result<OscillatorState> {
    let limit = if phys.is_harmonic() { f64::INFINITY } else { 3.0 * phys.omega / phys.k };
    if !(amplitude >= 0.0 && amplitude < limit) {
        return Err(Error::AmplitudeOutOfRange { amplitude, limit });
    }
    let c = phys.k * amplitude / (3.0 * phys.omega);
    let theta = phys.omega * t + phase;
    let (sin, cos) = theta.sin_cos();
    let denom = 1.0 - c * cos;
    Ok(OscillatorState {
        x: amplitude * sin / denom,
        v: phys.omega * amplitude * (cos - c) / (denom * denom),
    })
}

/// Fixed-step classical RK4 on `[0, t_end]`. The step is shrunk to divide
/// `t_end` evenly, so it never exceeds the requested value.
pub fn integrate_lienard(
    phys: &PhysicalParams,
    initial: OscillatorState,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be > 0, got {step}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be > 0, got {t_end}")));
    }
    let steps = (t_end / step - 1e-9).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;

    let f = |s: OscillatorState| (s.v, lienard_rhs(phys, &s));
    let mut times = Vec::with_capacity(steps + 1);
    let mut positions = Vec::with_capacity(steps + 1);
    let mut velocities = Vec::with_capacity(steps + 1);

    let mut s = initial;
    checked_phase(phys, &s)?;
    times.push(0.0);
    positions.push(s.x);
    velocities.push(s.v);
    for i in 1..=steps {
        let (k1x, k1v) = f(s);
        let (k2x, k2v) = f(OscillatorState::new(s.x + 0.5 * h * k1x, s.v + 0.5 * h * k1v));
        let (k3x, k3v) = f(OscillatorState::new(s.x + 0.5 * h * k2x, s.v + 0.5 * h * k2v));
        let (k4x, k4v) = f(OscillatorState::new(s.x + h * k3x, s.v + h * k3v));
        s = OscillatorState::new(
            s.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        );
        checked_phase(phys, &s)?;
        times.push(i as f64 * h);
        positions.push(s.x);
        velocities.push(s.v);
    }
    Ok(Trajectory { times, positions, velocities })
}

/// `r = 1 + sqrt(S)` where `S` is the phase-constraint value.
fn root_plus_one(phys: &PhysicalParams, s: &OscillatorState) -> Result<(f64, f64)> {
    let value = checked_phase(phys, s)?;
    let root = value.sqrt();
    Ok((root, 1.0 + root))
}

/// `L = (9w^4/k^2) [1 + kv/(3w^2) - sqrt(S)]`, evaluated as
/// `(2v^2 + k v x^2 / 3) / r^2 - w^2 x^2 / r` with `r = 1 + sqrt(S)`.
pub fn lagrangian(phys: &PhysicalParams, s: &OscillatorState) -> Result<f64> {
    let w2 = phys.omega * phys.omega;
    if phys.is_harmonic() {
        return Ok(0.5 * (s.v * s.v - w2 * s.x * s.x));
    }
    let (_, r) = root_plus_one(phys, s)?;
    Ok((2.0 * s.v * s.v + phys.k * s.v * s.x * s.x / 3.0) / (r * r) - w2 * s.x * s.x / r)
}

/// `p = (3w^2/k) [1 - S^{-1/2}] = (2v + k x^2/3) / (r sqrt(S))`.
pub fn conjugate_momentum(phys: &PhysicalParams, s: &OscillatorState) -> Result<f64> {
    if phys.is_harmonic() {
        return Ok(s.v);
    }
    let (root, r) = root_plus_one(phys, s)?;
    Ok((2.0 * s.v + phys.k * s.x * s.x / 3.0) / (r * root))
}

/// `H = p^2 / (2(1-q)) + (1-q) w^2 x^2 / 2` for `p < 3w^2/k`.
pub fn hamiltonian_classical(phys: &PhysicalParams, x: f64, p: f64) -> Result<f64> {
    phys.check_momentum(p)?;
    let u = 1.0 - phys.q(p);
    Ok(p * p / (2.0 * u) + 0.5 * u * phys.omega * phys.omega * x * x)
}

/// `d/dx (g/f) / f` for `f = kx`, `g = k^2 x^3 / 9 + w^2 x`, from the quotient rule.
fn multiplier_ratio(phys: &PhysicalParams, x: f64) -> f64 {
    let (k, w2) = (phys.k, phys.omega * phys.omega);
    let f = k * x;
    let df = k;
    let g = k * k * x.powi(3) / 9.0 + w2 * x;
    let dg = k * k * x * x / 3.0 + w2;
    (dg * f - g * df) / (f * f) / f
}

/// Residual `max |d/dx(g/f) - sigma(1-sigma) f|` of the last-multiplier
/// condition over the sample points (zero excluded, where `f` vanishes).
pub fn jlm_residual(phys: &PhysicalParams, sigma: f64, xs: &[f64]) -> f64 {
    let c = sigma * (1.0 - sigma);
    xs.iter()
        .filter(|&&x| x != 0.0)
        .map(|&x| {
            let f = phys.k * x;
            (multiplier_ratio(phys, x) * f - c * f).abs()
        })
        .fold(0.0, f64::max)
}

/// The two admissible exponents, roots of `sigma(1 - sigma) = c` where `c` is
/// the constant ratio `d/dx(g/f) / f` (checked to be constant on a grid).
pub fn jlm_sigma_roots(phys: &PhysicalParams) -> Result<(f64, f64)> {
    if phys.is_harmonic() {
        return Err(Error::InvalidParameter("the multiplier condition needs k > 0".into()));
    }
    let samples: Vec<f64> = (1..=40).map(|i| -5.0 + 0.25 * i as f64).filter(|x| *x != 0.0).collect();
    let ratios: Vec<f64> = samples.iter().map(|&x| multiplier_ratio(phys, x)).collect();
    let c = ratios[0];
    if ratios.iter().any(|r| (r - c).abs() > 1e-12 * c.abs().max(1.0)) {
        return Err(Error::InvalidParameter("multiplier ratio is not constant".into()));
    }
    let disc = 1.0 - 4.0 * c;
    if disc < 0.0 {
        return Err(Error::InvalidParameter(format!("no real exponent for ratio {c}")));
    }
    let root = disc.sqrt();
    Ok((0.5 * (1.0 - root), 0.5 * (1.0 + root)))
}

/// Whether `sigma` satisfies the condition (and is not one of the excluded 0, 1/2).
pub fn is_jlm_root(phys: &PhysicalParams, sigma: f64) -> bool {
    if sigma == 0.0 || sigma == 0.5 {
        return false;
    }
    let xs: Vec<f64> = (1..=20).map(|i| 0.3 * i as f64 - 3.1).collect();
    let scale = xs.iter().map(|x| (phys.k * x).abs()).fold(0.0, f64::max).max(1.0);
    jlm_residual(phys, sigma, &xs) < 1e-12 * scale
}
