//! Momentum-dependent mass, von Roos effective potential and the
//! finite-difference momentum-space Hamiltonian
//! `H = -(hbar w)^2/2 d/dp (1 - q) d/dp + V(p)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{MomentumGrid, SampledFunction};
use crate::params::{AmbiguityParams, Model, PhysicalParams};

/// Relative size a sampled state may keep at the grid ends.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

/// `m(p)` and its first two momentum derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassProfile {
    pub m: f64,
    pub dm: f64,
    pub d2m: f64,
}

/// `m = 1 / (w^2 (1 - q))` with analytic derivatives.
pub fn mass(phys: &PhysicalParams, p: f64) -> Result<MassProfile> {
    phys.check_momentum(p)?;
    let w2 = phys.omega * phys.omega;
    if phys.is_harmonic() {
        return Ok(MassProfile { m: 1.0 / w2, dm: 0.0, d2m: 0.0 });
    }
    let u = 1.0 - phys.q(p);
    let k = phys.k;
    Ok(MassProfile {
        m: 1.0 / (w2 * u),
        dm: k / (3.0 * w2 * w2) / (u * u),
        d2m: 2.0 * k * k / (9.0 * w2 * w2 * w2) / (u * u * u),
    })
}

/// `U(p) = p^2 / (2 (1 - q))`
pub fn potential_u(phys: &PhysicalParams, p: f64) -> Result<f64> {
    phys.check_momentum(p)?;
    if phys.is_harmonic() {
        return Ok(0.5 * p * p);
    }
    Ok(p * p / (2.0 * (1.0 - phys.q(p))))
}

/// Generic von Roos potential
/// `U + hbar^2/2 [ag m'^2/m^3 + (a+g)(m'^2/m^3 - m''/(2m^2))]`.
pub fn von_roos_potential(profile: &MassProfile, u: f64, amb: &AmbiguityParams, hbar: f64) -> f64 {
    let MassProfile { m, dm, d2m } = *profile;
    let slope = dm * dm / (m * m * m);
    let curvature = d2m / (2.0 * m * m);
    u + 0.5 * hbar * hbar * (amb.product() * slope + (amb.alpha + amb.gamma) * (slope - curvature))
}

/// Closed form `V = [p^2 + ag (hbar k / 3w)^2] / (2 (1 - q))`.
pub fn effective_potential(model: &Model, p: f64) -> Result<f64> {
    let phys = &model.phys;
    phys.check_momentum(p)?;
    if model.is_harmonic() {
        return Ok(0.5 * p * p);
    }
    let c = phys.hbar * phys.k / (3.0 * phys.omega);
    Ok((p * p + model.amb.product() * c * c) / (2.0 * (1.0 - phys.q(p))))
}

/// Kinetic coefficient `hbar^2 / (2 m) = (hbar w)^2 (1 - q) / 2` at `p`.
fn kinetic_coefficient(phys: &PhysicalParams, p: f64) -> f64 {
    0.5 * phys.hbar_omega().powi(2) * (1.0 - phys.q(p))
}

pub(crate) fn check_samples(grid: &MomentumGrid, samples: &SampledFunction) -> Result<()> {
    if samples.grid != *grid {
        return Err(Error::GridMismatch("samples were taken on a different grid".into()));
    }
    if samples.values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid of {} points",
            samples.values.len(),
            grid.len()
        )));
    }
    let max = samples.sup_norm();
    let edge = samples.values[0].abs().max(samples.values[grid.len() - 1].abs());
    if edge > BOUNDARY_TOLERANCE * max {
        return Err(Error::BoundaryNotVanishing { edge, max });
    }
    Ok(())
}

/// `H psi` on the interior points, flux-form second-order stencil with the
/// kinetic coefficient sampled at the midpoints `p_{i +- 1/2}`.
pub fn apply_hamiltonian_fd(model: &Model, grid: &MomentumGrid, samples: &SampledFunction) -> Result<SampledFunction> {
    check_samples(grid, samples)?;
    let (diag, off) = hamiltonian_matrix(model, grid)?;
    let psi = &samples.values;
    let n = grid.len();
    let values = (1..n - 1)
        .map(|i| off[i - 1] * psi[i - 1] + diag[i - 1] * psi[i] + off[i] * psi[i + 1])
        .collect();
    Ok(SampledFunction { grid: grid.interior(), values })
}

/// Tridiagonal matrix of the discretised Hamiltonian on the interior points.
///
/// Returns `(diag, off)` where `diag[j]` belongs to grid point `j + 1` and
/// `off[j]` couples grid points `j` and `j + 1` (so `off` has one entry more
/// than `diag`; its first and last entries couple to the fixed end values).
pub fn hamiltonian_matrix(model: &Model, grid: &MomentumGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let phys = &model.phys;
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let n = grid.len();
    let off: Vec<f64> = (0..n - 1)
        .map(|i| -kinetic_coefficient(phys, grid.point(i) + 0.5 * h) * inv_h2)
        .collect();
    let diag = (1..n - 1)
        .map(|i| Ok(-(off[i - 1] + off[i]) + effective_potential(model, grid.point(i))?))
        .collect::<Result<Vec<_>>>()?;
    Ok((diag, off))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalParams {
        PhysicalParams::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn mass_examples() {
        let m = mass(&unit(), 0.0).unwrap();
        assert_eq!(m.m, 1.0);
        assert!((mass(&unit(), -3.0).unwrap().m - 0.5).abs() < 1e-15);
        let h = mass(&PhysicalParams::new(0.0, 2.0, 1.0).unwrap(), 7.0).unwrap();
        assert_eq!((h.m, h.dm, h.d2m), (0.25, 0.0, 0.0));
        assert!(mass(&unit(), 3.0).is_err());
    }

    #[test]
    fn mass_derivatives_match_differences() {
        let phys = PhysicalParams::new(0.6, 1.4, 1.0).unwrap();
        let h = 1e-5;
        for &p in &[-3.0, 0.0, 4.0] {
            let c = mass(&phys, p).unwrap();
            let (l, r) = (mass(&phys, p - h).unwrap(), mass(&phys, p + h).unwrap());
            assert!(((r.m - l.m) / (2.0 * h) - c.dm).abs() < 1e-8 * c.dm.abs().max(1.0));
            assert!(((r.dm - l.dm) / (2.0 * h) - c.d2m).abs() < 1e-8 * c.d2m.abs().max(1.0));
        }
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential_u(&unit(), 0.0).unwrap(), 0.0);
        assert!((potential_u(&unit(), 1.5).unwrap() - 2.25).abs() < 1e-15);
        assert_eq!(potential_u(&PhysicalParams::new(0.0, 1.0, 1.0).unwrap(), 3.0).unwrap(), 4.5);
        assert!(potential_u(&unit(), 3.5).is_err());
    }

    #[test]
    fn von_roos_examples() {
        let amb = AmbiguityParams::new(19.0, 1.0).unwrap();
        let flat = MassProfile { m: 2.0, dm: 0.0, d2m: 0.0 };
        assert_eq!(von_roos_potential(&flat, 1.25, &amb, 1.0), 1.25);
        let at_zero = mass(&unit(), 0.0).unwrap();
        let v = von_roos_potential(&at_zero, 0.0, &amb, 1.0);
        assert!((v - 19.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let zero = Model::new(unit(), AmbiguityParams::default()).unwrap();
        assert_eq!(effective_potential(&zero, 0.0).unwrap(), 0.0);
        let nineteen = Model::new(unit(), AmbiguityParams::new(19.0, 1.0).unwrap()).unwrap();
        assert!((effective_potential(&nineteen, 0.0).unwrap() - 19.0 / 18.0).abs() < 1e-15);
        let harmonic = Model::new(PhysicalParams::new(0.0, 1.0, 1.0).unwrap(), AmbiguityParams::new(3.0, 3.0).unwrap()).unwrap();
        assert_eq!(effective_potential(&harmonic, 2.0).unwrap(), 2.0);
        assert!(effective_potential(&nineteen, 3.0).is_err());
    }

    #[test]
    fn zero_state_maps_to_zero() {
        let model = Model::new(unit(), AmbiguityParams::new(2.0, 3.0).unwrap()).unwrap();
        let grid = MomentumGrid::new(&model.phys, -10.0, 2.5, 200).unwrap();
        let zero = SampledFunction::new(grid, vec![0.0; grid.len()]).unwrap();
        let out = apply_hamiltonian_fd(&model, &grid, &zero).unwrap();
        assert_eq!(out.values.len(), grid.len() - 2);
        assert!(out.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_foreign_or_non_vanishing_samples() {
        let model = Model::new(unit(), AmbiguityParams::default()).unwrap();
        let grid = MomentumGrid::new(&model.phys, -10.0, 2.5, 200).unwrap();
        let other = MomentumGrid::new(&model.phys, -10.0, 2.5, 100).unwrap();
        let f = other.sample(|_| Ok(0.0)).unwrap();
        assert!(matches!(apply_hamiltonian_fd(&model, &grid, &f), Err(Error::GridMismatch(_))));
        let ones = grid.sample(|_| Ok(1.0)).unwrap();
        assert!(matches!(
            apply_hamiltonian_fd(&model, &grid, &ones),
            Err(Error::BoundaryNotVanishing { .. })
        ));
    }

    #[test]
    fn discrete_operator_is_symmetric() {
        let model = Model::new(unit(), AmbiguityParams::new(19.0, 1.0).unwrap()).unwrap();
        let grid = MomentumGrid::new(&model.phys, -4.0, 2.8, 40).unwrap();
        let n = grid.len();
        // column j of the interior matrix = H e_j
        let columns: Vec<Vec<f64>> = (1..n - 1)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                let f = SampledFunction::new(grid, e).unwrap();
                apply_hamiltonian_fd(&model, &grid, &f).unwrap().values
            })
            .collect();
        for i in 0..n - 2 {
            for j in 0..n - 2 {
                let (a, b) = (columns[j][i], columns[i][j]);
                assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0), "({i}, {j})");
            }
        }
    }
}
