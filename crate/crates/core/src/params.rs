//! Physical, ambiguity and derived parameters of the quantized oscillator.
//!
//! The deformation `k = 0` is kept as its own branch: the dimensionless scale
//! `a = 9 w^3 / (hbar k^2)` diverges there, so every downstream evaluator asks
//! [`Model::derived`] and falls back to plain harmonic-oscillator formulas when
//! it is `None`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deformation strength `k`, angular frequency `omega` and action scale `hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub k: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(k: f64, omega: f64, hbar: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidParameter(format!("k must be finite and >= 0, got {k}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be finite and > 0, got {omega}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be finite and > 0, got {hbar}")));
        }
        Ok(Self { k, omega, hbar })
    }

    /// Same as [`PhysicalParams::new`] with `hbar = 1`.
    pub fn unit_hbar(k: f64, omega: f64) -> Result<Self> {
        Self::new(k, omega, 1.0)
    }

    pub fn is_harmonic(&self) -> bool {
        self.k == 0.0
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar * self.omega
    }

    /// `q = k p / (3 w^2)`, so that `1 - q` is the inverse mass factor.
    pub fn q(&self, p: f64) -> f64 {
        self.k * p / (3.0 * self.omega * self.omega)
    }

    /// Upper momentum bound `3 w^2 / k`, `None` when undeformed.
    pub fn p_max(&self) -> Option<f64> {
        match momentum_domain(self) {
            MomentumDomain::UpperBound(p) => Some(p),
            MomentumDomain::Unbounded => None,
        }
    }

    /// Fails with [`Error::MomentumDomain`] unless `p < 3 w^2 / k`.
    pub fn check_momentum(&self, p: f64) -> Result<()> {
        if !p.is_finite() {
            return Err(Error::InvalidParameter(format!("momentum must be finite, got {p}")));
        }
        match self.p_max() {
            Some(p_max) if p >= p_max => Err(Error::MomentumDomain { p, p_max }),
            _ => Ok(()),
        }
    }
}

/// Von Roos ordering exponents. `beta = -1 - alpha - gamma` is implied.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AmbiguityParams {
    pub alpha: f64,
    pub gamma: f64,
}

impl AmbiguityParams {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ambiguity parameters must be finite, got alpha = {alpha}, gamma = {gamma}"
            )));
        }
        Ok(Self { alpha, gamma })
    }

    pub fn beta(&self) -> f64 {
        -1.0 - self.alpha - self.gamma
    }

    /// The only combination the physics depends on.
    pub fn product(&self) -> f64 {
        self.alpha * self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MomentumDomain {
    UpperBound(f64),
    Unbounded,
}

pub fn momentum_domain(phys: &PhysicalParams) -> MomentumDomain {
    if phys.is_harmonic() {
        MomentumDomain::Unbounded
    } else {
        MomentumDomain::UpperBound(3.0 * phys.omega * phys.omega / phys.k)
    }
}

/// Quantities derived from a deformed (`k > 0`) parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// `a = 9 w^3 / (hbar k^2)`
    pub a_script: f64,
    /// `lambda = sqrt(a^2 + alpha*gamma)`
    pub lambda: f64,
    /// Spectral shift `lambda - a`.
    pub shift: f64,
    /// Superpotential offset `b = hbar k (lambda - a) / (3 sqrt(2) w)`.
    pub b_coef: f64,
    /// Superpotential slope, always `1/sqrt(2)`.
    pub a_coef: f64,
    pub p_max: f64,
    pub alpha_gamma: f64,
}

pub fn derive_params(phys: &PhysicalParams, amb: &AmbiguityParams) -> Result<DerivedParams> {
    if phys.is_harmonic() {
        return Err(Error::InvalidParameter(
            "derived parameters need k > 0; use the harmonic branch for k = 0".into(),
        ));
    }
    let (k, w, hbar) = (phys.k, phys.omega, phys.hbar);
    let a_script = 9.0 * w.powi(3) / (hbar * k * k);
    let product = amb.product();
    let bound = -a_script * a_script;
    let radicand = a_script * a_script + product;
    if !(radicand > 0.0) || !(product > bound) {
        return Err(Error::AmbiguityConstraint { product, bound });
    }
    let lambda = radicand.sqrt();
    // lambda - a written without the cancellation for large a
    let shift = product / (lambda + a_script);
    let b_coef = hbar * k / (3.0 * std::f64::consts::SQRT_2 * w) * shift;
    Ok(DerivedParams {
        a_script,
        lambda,
        shift,
        b_coef,
        a_coef: std::f64::consts::FRAC_1_SQRT_2,
        p_max: 3.0 * w * w / k,
        alpha_gamma: product,
    })
}

/// A validated parameter set: physical and ambiguity parameters plus the
/// derived quantities when the oscillator is deformed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub phys: PhysicalParams,
    pub amb: AmbiguityParams,
    derived: Option<DerivedParams>,
}

impl Model {
    pub fn new(phys: PhysicalParams, amb: AmbiguityParams) -> Result<Self> {
        let derived = if phys.is_harmonic() {
            None
        } else {
            Some(derive_params(&phys, &amb)?)
        };
        Ok(Self { phys, amb, derived })
    }

    /// `None` for the harmonic (`k = 0`) branch.
    pub fn derived(&self) -> Option<&DerivedParams> {
        self.derived.as_ref()
    }

    pub fn is_harmonic(&self) -> bool {
        self.derived.is_none()
    }

    pub fn hbar_omega(&self) -> f64 {
        self.phys.hbar_omega()
    }

    /// `lambda - a`, zero on the harmonic branch.
    pub fn shift(&self) -> f64 {
        self.derived.map_or(0.0, |d| d.shift)
    }

    /// Map a momentum to `y = 2a(1 - q)`.
    pub fn y_of_p(&self, p: f64) -> Option<f64> {
        self.derived.map(|d| 2.0 * d.a_script * (1.0 - p / d.p_max))
    }

    pub fn p_of_y(&self, y: f64) -> Option<f64> {
        self.derived.map(|d| d.p_max * (1.0 - y / (2.0 * d.a_script)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: f64) -> PhysicalParams {
        PhysicalParams::new(k, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_product_has_no_shift() {
        let d = derive_params(&unit(1.0), &AmbiguityParams::new(0.0, 0.0).unwrap()).unwrap();
        assert_eq!(d.a_script, 9.0);
        assert_eq!(d.lambda, 9.0);
        assert_eq!(d.shift, 0.0);
        assert_eq!(d.b_coef, 0.0);
    }

    #[test]
    fn product_nineteen_gives_unit_shift() {
        let d = derive_params(&unit(1.0), &AmbiguityParams::new(19.0, 1.0).unwrap()).unwrap();
        assert!((d.lambda - 10.0).abs() < 1e-14);
        assert!((d.shift - 1.0).abs() < 1e-14);
        assert!((d.b_coef - 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn boundary_product_rejected() {
        let err = derive_params(&unit(1.0), &AmbiguityParams::new(-9.0, 9.0).unwrap()).unwrap_err();
        assert_eq!(err, Error::AmbiguityConstraint { product: -81.0, bound: -81.0 });
        assert!(derive_params(&unit(1.0), &AmbiguityParams::new(-10.0, 9.0).unwrap()).is_err());
        assert!(derive_params(&unit(1.0), &AmbiguityParams::new(-8.0, 10.0).unwrap()).is_ok());
    }

    #[test]
    fn momentum_bounds() {
        assert_eq!(momentum_domain(&unit(1.0)), MomentumDomain::UpperBound(3.0));
        let p = PhysicalParams::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(momentum_domain(&p), MomentumDomain::UpperBound(12.0));
        assert_eq!(momentum_domain(&unit(0.0)), MomentumDomain::Unbounded);
        assert!(unit(1.0).check_momentum(3.0).is_err());
        assert!(unit(1.0).check_momentum(2.999).is_ok());
        assert!(unit(0.0).check_momentum(1e9).is_ok());
    }

    #[test]
    fn only_product_matters() {
        let phys = unit(0.7);
        let a = derive_params(&phys, &AmbiguityParams::new(2.0, 3.0).unwrap()).unwrap();
        let b = derive_params(&phys, &AmbiguityParams::new(6.0, 1.0).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shift_vanishes_with_deformation() {
        let amb = AmbiguityParams::new(19.0, 1.0).unwrap();
        let shifts: Vec<f64> = (1..=6)
            .map(|e| derive_params(&unit(10f64.powi(-e)), &amb).unwrap().shift.abs())
            .collect();
        assert!(shifts.windows(2).all(|w| w[1] < w[0]), "{shifts:?}");
    }

    #[test]
    fn invalid_physical_params() {
        assert!(PhysicalParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(derive_params(&unit(0.0), &AmbiguityParams::default()).is_err());
    }

    #[test]
    fn y_map_round_trips() {
        let m = Model::new(unit(1.0), AmbiguityParams::default()).unwrap();
        assert_eq!(m.y_of_p(3.0), Some(0.0));
        assert_eq!(m.y_of_p(0.0), Some(18.0));
        assert!((m.p_of_y(m.y_of_p(-2.5).unwrap()).unwrap() + 2.5).abs() < 1e-14);
        let h = Model::new(unit(0.0), AmbiguityParams::new(5.0, 5.0).unwrap()).unwrap();
        assert!(h.is_harmonic());
        assert_eq!(h.shift(), 0.0);
    }
}
