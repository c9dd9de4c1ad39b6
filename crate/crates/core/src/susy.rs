//! Supersymmetric solution: superpotential `W = (a p + b) / sqrt(1 - q)`,
//! partner potentials, the Riccati identity, shape invariance, the ladder
//! operators and the algebraic spectrum.
//!
//! Identity checks (Riccati, partner definitions, remainder) use analytic
//! derivatives throughout. Finite differences only appear when the ladder
//! operators act on sampled states.

use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::grid::{MomentumGrid, SampledFunction};
use crate::params::{AmbiguityParams, Model, PhysicalParams};
use crate::quantize::{check_samples, effective_potential, mass};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Superpotential {
    pub phys: PhysicalParams,
    pub a_coef: f64,
    pub b_coef: f64,
}

impl Superpotential {
    /// Arbitrary `(a, b)`, checked against the square-integrability bounds
    /// `a > 0` and `b > -(3 w^2 / k) a`.
    pub fn new(phys: PhysicalParams, a_coef: f64, b_coef: f64) -> Result<Self> {
        if !(a_coef > 0.0) {
            return Err(Error::InvalidParameter(format!("superpotential slope must be > 0, got {a_coef}")));
        }
        if let Some(p_max) = phys.p_max() {
            if !(b_coef > -p_max * a_coef) {
                return Err(Error::InvalidParameter(format!(
                    "superpotential offset {b_coef} must exceed {}",
                    -p_max * a_coef
                )));
            }
        }
        Ok(Self { phys, a_coef, b_coef })
    }

    /// The solution of the Riccati equation: `a = 1/sqrt(2)`, `b` from the
    /// derived parameters (zero on the harmonic branch).
    pub fn fitted(model: &Model) -> Self {
        Self {
            phys: model.phys,
            a_coef: std::f64::consts::FRAC_1_SQRT_2,
            b_coef: model.derived().map_or(0.0, |d| d.b_coef),
        }
    }

    /// Partner with `b -> b + hbar k / (6 sqrt(2) w)`.
    pub fn shifted(&self) -> Self {
        Self { b_coef: self.b_coef + offset_step(&self.phys), ..*self }
    }

    pub fn with_offset(&self, b_coef: f64) -> Self {
        Self { b_coef, ..*self }
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        self.phys.check_momentum(p)?;
        Ok((self.a_coef * p + self.b_coef) / (1.0 - self.phys.q(p)).sqrt())
    }

    /// `W'(p)`
    pub fn derivative(&self, p: f64) -> Result<f64> {
        self.phys.check_momentum(p)?;
        let u = 1.0 - self.phys.q(p);
        let c1 = self.phys.k / (3.0 * self.phys.omega * self.phys.omega);
        Ok(self.a_coef / u.sqrt() + (self.a_coef * p + self.b_coef) * 0.5 * c1 / (u * u.sqrt()))
    }

    /// Exponent `E = (3 sqrt(2) w / hbar k)(b + 3 w^2 a / k)` of `(1 - q)` in
    /// the ground state; `None` when undeformed.
    pub fn ground_state_exponent(&self) -> Option<f64> {
        let phys = &self.phys;
        phys.p_max().map(|p_max| {
            3.0 * SQRT_2 * phys.omega / (phys.hbar * phys.k) * (self.b_coef + p_max * self.a_coef)
        })
    }

    /// Log of the unnormalised ground state annihilated by `A`.
    pub fn ground_state_log(&self, p: f64) -> Result<f64> {
        let phys = &self.phys;
        phys.check_momentum(p)?;
        match self.ground_state_exponent() {
            Some(e) => {
                let c = 3.0 * SQRT_2 * phys.omega * self.a_coef / (phys.hbar * phys.k);
                Ok(e * (-phys.q(p)).ln_1p() + c * p)
            }
            None => Ok(-SQRT_2 / phys.hbar_omega() * (0.5 * self.a_coef * p * p + self.b_coef * p)),
        }
    }
}

/// `hbar k / (6 sqrt(2) w)`, the offset step between shape-invariant partners.
pub fn offset_step(phys: &PhysicalParams) -> f64 {
    phys.hbar * phys.k / (6.0 * SQRT_2 * phys.omega)
}

pub fn superpotential_eval(sp: &Superpotential, p: f64) -> Result<f64> {
    sp.eval(p)
}

/// Compact partner potentials `(V_-, V_+)` for an arbitrary superpotential.
pub fn partner_potentials_for(sp: &Superpotential, p: f64) -> Result<(f64, f64)> {
    let phys = &sp.phys;
    phys.check_momentum(p)?;
    let u = 1.0 - phys.q(p);
    let lin = sp.a_coef * p + sp.b_coef;
    let gap = phys.hbar_omega() * sp.a_coef / SQRT_2;
    let shifted = lin + offset_step(phys);
    Ok((lin * lin / u - gap, shifted * shifted / u + gap))
}

/// `(V_-, V_+)` of the fitted superpotential.
pub fn partner_potentials(model: &Model, p: f64) -> Result<(f64, f64)> {
    partner_potentials_for(&Superpotential::fitted(model), p)
}

/// `(V_-, V_+)` evaluated from their defining expressions in `W` and `m`.
pub fn partner_potentials_from_definition(sp: &Superpotential, p: f64) -> Result<(f64, f64)> {
    let hbar = sp.phys.hbar;
    let mp = mass(&sp.phys, p)?;
    let w = sp.eval(p)?;
    let dw = sp.derivative(p)?;
    let sqrt_m = mp.m.sqrt();
    let m32 = mp.m * sqrt_m;
    let minus = w * w - hbar / SQRT_2 * (dw / sqrt_m - w * mp.dm / (2.0 * m32));
    let plus = w * w + hbar / SQRT_2 * (dw / sqrt_m + w * mp.dm / (2.0 * m32))
        - 0.5 * hbar * hbar * (0.75 * mp.dm * mp.dm / (m32 * m32) - 0.5 * mp.d2m / (mp.m * mp.m));
    Ok((minus, plus))
}

/// `max |W^2 - (hbar/sqrt 2)(W/sqrt m)' - V + e0|` over the grid, for the
/// fitted superpotential and `e0 = (1/2 + lambda - a) hbar w`.
pub fn riccati_residual(model: &Model, grid: &MomentumGrid) -> Result<f64> {
    let e0 = (0.5 + model.shift()) * model.hbar_omega();
    riccati_residual_with(model, &Superpotential::fitted(model), e0, grid)
}

/// Riccati residual for an arbitrary superpotential and trial ground energy.
pub fn riccati_residual_with(model: &Model, sp: &Superpotential, e0: f64, grid: &MomentumGrid) -> Result<f64> {
    let hbar = model.phys.hbar;
    grid.points().try_fold(0.0f64, |acc, p| {
        let mp = mass(&model.phys, p)?;
        let w = sp.eval(p)?;
        let dw = sp.derivative(p)?;
        let sqrt_m = mp.m.sqrt();
        let d_ratio = dw / sqrt_m - w * mp.dm / (2.0 * mp.m * sqrt_m);
        let residual = w * w - hbar / SQRT_2 * d_ratio - effective_potential(model, p)? + e0;
        Ok(acc.max(residual.abs()))
    })
}

/// Mean and standard deviation of `V_+(p; b) - V_-(p; b + hbar k/(6 sqrt 2 w))`.
pub fn shape_invariance_remainder(model: &Model, grid: &MomentumGrid) -> Result<(f64, f64)> {
    let sp = Superpotential::fitted(model);
    remainder_statistics(&sp, &sp.shifted(), grid)
}

/// Remainder statistics for an explicit partner pair.
pub fn remainder_statistics(first: &Superpotential, second: &Superpotential, grid: &MomentumGrid) -> Result<(f64, f64)> {
    let values = grid
        .points()
        .map(|p| Ok(partner_potentials_for(first, p)?.1 - partner_potentials_for(second, p)?.0))
        .collect::<Result<Vec<f64>>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub levels: Vec<Level>,
    pub model: Model,
}

impl SpectrumTable {
    pub fn energy(&self, n: usize) -> Option<f64> {
        self.levels.get(n).map(|l| l.energy)
    }

    /// `e0 + sum_{i=1}^{n} R(a_i)` with the constant remainder
    /// `R = sqrt(2) a hbar w` of the shape-invariant chain.
    pub fn algebraic_energy(&self, n: usize) -> f64 {
        let hw = self.model.hbar_omega();
        let remainder = SQRT_2 * Superpotential::fitted(&self.model).a_coef * hw;
        let ground = (0.5 + self.model.shift()) * hw;
        (1..=n).fold(ground, |acc, _| acc + remainder)
    }
}

/// `e_n = (n + 1/2 + lambda - a) hbar w` for `n = 0..=n_max`.
pub fn spectrum(phys: &PhysicalParams, amb: &AmbiguityParams, n_max: usize) -> Result<SpectrumTable> {
    let model = Model::new(*phys, *amb)?;
    Ok(spectrum_of(&model, n_max))
}

pub fn spectrum_of(model: &Model, n_max: usize) -> SpectrumTable {
    let hw = model.hbar_omega();
    let shift = model.shift();
    let levels = (0..=n_max)
        .map(|n| Level { n, energy: (n as f64 + 0.5 + shift) * hw })
        .collect();
    SpectrumTable { levels, model: *model }
}

/// `A psi = (hbar/sqrt 2) m^{-1/2} psi' + W psi` on the interior points.
pub fn apply_lowering(sp: &Superpotential, grid: &MomentumGrid, samples: &SampledFunction) -> Result<SampledFunction> {
    check_samples(grid, samples)?;
    let h = grid.spacing();
    let psi = &samples.values;
    let coef = sp.phys.hbar / SQRT_2;
    let values = (1..grid.len() - 1)
        .map(|i| {
            let p = grid.point(i);
            let inv_sqrt_m = 1.0 / mass(&sp.phys, p)?.m.sqrt();
            let dpsi = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
            Ok(coef * inv_sqrt_m * dpsi + sp.eval(p)? * psi[i])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledFunction { grid: grid.interior(), values })
}

/// `A+ psi = -(hbar/sqrt 2) d/dp (m^{-1/2} psi) + W psi` on the interior points.
pub fn apply_raising(sp: &Superpotential, grid: &MomentumGrid, samples: &SampledFunction) -> Result<SampledFunction> {
    check_samples(grid, samples)?;
    let h = grid.spacing();
    let psi = &samples.values;
    let coef = sp.phys.hbar / SQRT_2;
    let scaled = grid
        .points()
        .zip(psi)
        .map(|(p, v)| Ok(v / mass(&sp.phys, p)?.m.sqrt()))
        .collect::<Result<Vec<f64>>>()?;
    let values = (1..grid.len() - 1)
        .map(|i| {
            let d = (scaled[i + 1] - scaled[i - 1]) / (2.0 * h);
            Ok(-coef * d + sp.eval(grid.point(i))? * psi[i])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledFunction { grid: grid.interior(), values })
}

/// Unnormalised ground state `(1 - q)^E exp(3 sqrt(2) w a p / (hbar k))` of
/// the fitted superpotential (`exp(-p^2 / 2 hbar w)` when undeformed).
///
/// Overflows for very large `a`; use [`Superpotential::ground_state_log`] there.
pub fn ground_state_closed_form(model: &Model, p: f64) -> Result<f64> {
    Ok(Superpotential::fitted(model).ground_state_log(p)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;

    fn model(k: f64, omega: f64, alpha: f64, gamma: f64) -> Model {
        Model::new(PhysicalParams::new(k, omega, 1.0).unwrap(), AmbiguityParams::new(alpha, gamma).unwrap()).unwrap()
    }

    fn check_grid(m: &Model) -> MomentumGrid {
        MomentumGrid::for_states_with_intervals(m, 0, 999).unwrap()
    }

    #[test]
    fn superpotential_examples() {
        let zero = model(1.0, 1.0, 0.0, 0.0);
        assert_eq!(Superpotential::fitted(&zero).eval(0.0).unwrap(), 0.0);
        let m = model(1.0, 1.0, 19.0, 1.0);
        let sp = Superpotential::fitted(&m);
        assert!((sp.eval(0.0).unwrap() - 1.0 / (3.0 * SQRT_2)).abs() < 1e-15);
        assert!((sp.eval(0.0).unwrap() - 0.235_702).abs() < 1e-6);
        assert_eq!(sp.a_coef, std::f64::consts::FRAC_1_SQRT_2);
        assert!(sp.eval(3.0).is_err());
    }

    #[test]
    fn superpotential_bounds() {
        let phys = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(Superpotential::new(phys, 0.0, 0.0).is_err());
        assert!(Superpotential::new(phys, 1.0, -3.0).is_err());
        assert!(Superpotential::new(phys, 1.0, -2.9).is_ok());
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let sp = Superpotential::fitted(&model(0.8, 1.2, 4.0, 2.5));
        let h = 1e-6;
        for &p in &[-4.0, 0.0, 3.0] {
            let fd = (sp.eval(p + h).unwrap() - sp.eval(p - h).unwrap()) / (2.0 * h);
            assert!((fd - sp.derivative(p).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn partner_examples() {
        let (vm, _) = partner_potentials(&model(1.0, 1.0, 0.0, 0.0), 0.0).unwrap();
        assert!((vm + 0.5).abs() < 1e-15);
        let h = model(0.0, 1.0, 7.0, 2.0);
        for &p in &[-2.0, 0.5, 3.0] {
            let (vm, vp) = partner_potentials(&h, p).unwrap();
            assert!((vm - (0.5 * p * p - 0.5)).abs() < 1e-14);
            assert!((vp - (0.5 * p * p + 0.5)).abs() < 1e-14);
        }
    }

    #[test]
    fn compact_forms_match_definitions() {
        for m in [model(1.0, 1.0, 0.0, 0.0), model(1.0, 1.0, 19.0, 1.0), model(0.5, 2.0, -3.0, 4.0)] {
            let sp = Superpotential::fitted(&m);
            for p in check_grid(&m).points().step_by(37) {
                let (a, b) = partner_potentials_for(&sp, p).unwrap();
                let (c, d) = partner_potentials_from_definition(&sp, p).unwrap();
                let scale = a.abs().max(b.abs()).max(1.0);
                assert!((a - c).abs() < 1e-10 * scale && (b - d).abs() < 1e-10 * scale, "p = {p}");
            }
        }
    }

    #[test]
    fn riccati_identity() {
        let zero = model(1.0, 1.0, 0.0, 0.0);
        assert!(riccati_residual(&zero, &check_grid(&zero)).unwrap() < 1e-10);
        let m = model(1.0, 1.0, 19.0, 1.0);
        assert!((spectrum_of(&m, 0).energy(0).unwrap() - 1.5).abs() < 1e-14);
        assert!(riccati_residual(&m, &check_grid(&m)).unwrap() < 1e-10);
        let sp = Superpotential::fitted(&m);
        let perturbed = sp.with_offset(sp.b_coef + 1e-3);
        let residual = riccati_residual_with(&m, &perturbed, 1.5, &check_grid(&m)).unwrap();
        assert!(residual > 1e-4, "{residual}");
    }

    #[test]
    fn shape_invariance() {
        for m in [model(1.0, 1.0, 0.0, 0.0), model(1.0, 1.0, 19.0, 1.0)] {
            let (mean, std) = shape_invariance_remainder(&m, &check_grid(&m)).unwrap();
            assert!((mean - 1.0).abs() < 1e-12 && std < 1e-12, "{mean} {std}");
        }
        let m = model(1.0, 2.0, 19.0, 1.0);
        let (mean, _) = shape_invariance_remainder(&m, &check_grid(&m)).unwrap();
        assert!((mean - 2.0).abs() < 1e-12);
        let sp = Superpotential::fitted(&m);
        let (_, std) = remainder_statistics(&sp, &sp, &check_grid(&m)).unwrap();
        assert!(std > 1e-3);
    }

    #[test]
    fn spectrum_examples() {
        let phys = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let s = spectrum(&phys, &AmbiguityParams::default(), 5).unwrap();
        let energies: Vec<f64> = s.levels.iter().map(|l| l.energy).collect();
        assert_eq!(energies, vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
        let s = spectrum(&phys, &AmbiguityParams::new(19.0, 1.0).unwrap(), 8).unwrap();
        assert!((s.energy(0).unwrap() - 1.5).abs() < 1e-14);
        for n in 0..=8 {
            assert!((s.algebraic_energy(n) - s.energy(n).unwrap()).abs() < 1e-14);
        }
        assert!(spectrum(&phys, &AmbiguityParams::new(-9.0, 9.0).unwrap(), 3).is_err());
    }

    #[test]
    fn ground_state_exponent_is_lambda() {
        let m = model(1.0, 1.0, 19.0, 1.0);
        let e = Superpotential::fitted(&m).ground_state_exponent().unwrap();
        assert!((e - 10.0).abs() < 1e-12);
        let d = derive_params(&m.phys, &m.amb).unwrap();
        assert!((e - d.lambda).abs() < 1e-12);
        let near_edge = ground_state_closed_form(&m, 3.0 - 1e-9).unwrap();
        assert!(near_edge < 1e-60);
        assert!(ground_state_closed_form(&m, 3.0).is_err());
    }
}
